"""Plain-text matrix and sign-vector files.

Matrix file: first line ``rows cols``, then the entries in column-major
order, whitespace separated.  Entries are written with 17 significant digits
(human mode) or as hexadecimal floats (exact mode); the reader accepts both.
Sign file: first line ``n``, then ``n`` values, each -1 or 1.
"""

import numpy as np

from .matrix import as_signs


def _format(x, exact):
    return float(x).hex() if exact else f"{x:.17g}"


def _parse(tok):
    if "0x" in tok or "0X" in tok or tok.lower().lstrip("+-") in ("inf", "nan"):
        return float.fromhex(tok) if "0x" in tok.lower() else float(tok)
    return float(tok)


def format_matrix(a, exact=False, per_line=4):
    a = np.asarray(a, dtype=np.float64)
    rows, cols = a.shape
    vals = [_format(v, exact) for v in a.ravel(order="F")]
    lines = [f"{rows} {cols}"]
    for k in range(0, len(vals), per_line):
        lines.append(" ".join(vals[k:k + per_line]))
    return "\n".join(lines) + "\n"


def parse_matrix(text):
    toks = text.split()
    if len(toks) < 2:
        raise ValueError("matrix file is missing the 'rows cols' header")
    rows, cols = int(toks[0]), int(toks[1])
    body = toks[2:]
    if len(body) != rows * cols:
        raise ValueError(f"expected {rows * cols} values, found {len(body)}")
    data = np.array([_parse(t) for t in body], dtype=np.float64)
    return np.asfortranarray(data.reshape((rows, cols), order="F"))


def write_matrix(path, a, exact=False):
    with open(path, "w") as fh:
        fh.write(format_matrix(a, exact=exact))


def read_matrix(path):
    with open(path) as fh:
        return parse_matrix(fh.read())


def write_signs(path, j):
    j = as_signs(j)
    with open(path, "w") as fh:
        fh.write(f"{j.shape[0]}\n")
        fh.write(" ".join(str(int(v)) for v in j) + "\n")


def read_signs(path):
    with open(path) as fh:
        toks = fh.read().split()
    n = int(toks[0])
    vals = [int(t) for t in toks[1:]]
    if len(vals) != n:
        raise ValueError(f"expected {n} signs, found {len(vals)}")
    return as_signs(vals)


def write_vector(path, v, exact=False):
    v = np.asarray(v, dtype=np.float64)
    with open(path, "w") as fh:
        fh.write(f"{v.shape[0]}\n")
        for x in v:
            fh.write(_format(x, exact) + "\n")


def read_vector(path):
    with open(path) as fh:
        toks = fh.read().split()
    n = int(toks[0])
    if len(toks) - 1 != n:
        raise ValueError(f"expected {n} values, found {len(toks) - 1}")
    return np.array([_parse(t) for t in toks[1:]], dtype=np.float64)
