"""Hand-written MaxSAT-resolution proofs on small instances.

Each entry is ``(name, bcnf, msr proof, expected bound or None if rejected)``.
"""

# resolve the copied hard clause b3 v b4 v b5 against the soft units -b3 -b4 -b5
_THREE_WAY = """\
h 3 4 5 0
s+ 3 4 5 0
sp 4 -3 0
sp 5 -3 4 0
sm 3 4 5 0
sp 5 -4 0
sm 4 5 0
sm 5 0
conclude bot 1
"""

CASES = [
    ("two_copies", "p bcnf 2 2 1\nb 2 0\n1 2 0\n-1 2 0\n",
     "h 2 0\ns+ 2 0\nsm 2 0\nconclude bot 1\n", 1),
    ("forced_unit", "p bcnf 1 1 1\nb 1 0\n1 0\n",
     "s+ 1 0\nsm 1 0\nconclude bot 1\n", 1),
    ("free", "p bcnf 2 1 1\nb 2 0\n1 2 0\n",
     "conclude bot 0\n", 0),
    ("two_forced", "p bcnf 2 2 2\nb 1 2 0\n1 0\n2 0\n",
     "s+ 1 0\nsm 1 0\ns+ 2 0\nsm 2 0\nconclude bot 2\n", 2),
    ("bphp_2_1", "p bcnf 5 3 3\nb 3 4 5 0\n1 3 0\n2 4 0\n-1 -2 5 0\n", _THREE_WAY, 1),
    ("worked_formula", "p bcnf 5 3 3\nb 3 4 5 0\n1 2 3 0\n-1 4 0\n-2 5 0\n", _THREE_WAY, 1),
    ("split_round_trip", "p bcnf 5 3 3\nb 3 4 5 0\n1 2 3 0\n-1 4 0\n-2 5 0\n",
     "sp 1 -3 0\nsp 2 -3 1 0\nsm 2 -3 1 0\nsm 1 -3 0\nconclude bot 0\n", 0),
    ("with_redundancy", "p bcnf 3 2 2\nb 2 3 0\n1 2 0\n-1 3 0\n",
     "hw -2 -3 0 w 1 t 2 f 3 t 0 #pr\nh 2 3 0\ns+ 2 3 0\nsp 3 -2 0\nsm 2 3 0\nsm 3 0\nconclude bot 1\n", 1),
    ("hamming_1", "p bcnf 6 8 2\nb 5 6 0\n1 3 0\n-1 -3 0\n-1 2 0\n1 -2 0\n-3 4 0\n3 -4 0\n-2 5 0\n-4 6 0\n",
     "h 5 6 0\ns+ 5 6 0\nsp 6 -5 0\nsm 5 6 0\nsm 6 0\nconclude bot 1\n", 1),
    ("overclaim", "p bcnf 2 2 1\nb 2 0\n1 2 0\n-1 2 0\n",
     "h 2 0\ns+ 2 0\nsm 2 0\nconclude bot 2\n", None),
]
