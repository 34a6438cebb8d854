"""Hand-transcribed reference objects for d = 2 and d = 3.

Matrices use a/b for the first/second coordinate of v_ij; decode() turns
them into integers via alpha_ij = 10i + j, beta_ij = 100 + 10i + j, which
are distinct so every entry identifies its symbol and sign.
"""
from dets2.core import EdgeTensor
from dets2.field import Q

D2_A = """
a12 -a13 0 a14 0 0
b12 -b13 0 b14 0 0
a12 0 -a23 0 a24 0
b12 0 -b23 0 b24 0
0 a13 -a23 0 0 a34
0 b13 -b23 0 0 b34
0 0 0 a14 -a24 a34
0 0 0 b14 -b24 b34
"""

D2_A2 = """
a12 -a13 0 a14 0 0
b12 -b13 0 b14 0 0
0 a13 -a23 0 0 a34
0 b13 -b23 0 0 b34
0 0 0 a14 -a24 a34
0 0 0 b14 -b24 b34
"""

D2_M2 = """
a12 0 -a23 0 a24 0
b12 0 -b23 0 b24 0
"""

# color classes of E_2
E2_CLASSES = {1: [(1, 2), (1, 4), (2, 3)], 2: [(1, 3), (2, 4), (3, 4)]}

# E_3 row by row: entry (i, j) for j = i+1..6, as the index of the basis vector
E3_ROWS = {
    1: [1, 2, 1, 3, 1],
    2: [1, 2, 1, 3],
    3: [2, 3, 2],
    4: [2, 3],
    5: [3],
}

# the three spanning trees of E_3
E3_CLASSES = {
    1: [(1, 2), (1, 4), (1, 6), (2, 3), (2, 5)],
    2: [(1, 3), (2, 4), (3, 4), (3, 6), (4, 5)],
    3: [(1, 5), (2, 6), (3, 5), (4, 6), (5, 6)],
}


def symbolic_tensor():
    return EdgeTensor.from_function(2, Q, lambda e: [10 * e[0] + e[1], 100 + 10 * e[0] + e[1]])


def decode(text):
    def val(tok):
        if tok == "0":
            return 0
        sign = -1 if tok.startswith("-") else 1
        tok = tok.lstrip("-")
        i, j = int(tok[1]), int(tok[2])
        return sign * ((10 * i + j) if tok[0] == "a" else (100 + 10 * i + j))

    return tuple(tuple(val(t) for t in line.split()) for line in text.strip().splitlines())
