"""Reference values the engine is diffed against. Stored verbatim; never regenerated."""

# a_ij for the printed i and j = 1..11
TABLE1 = {
    1: (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    2: (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    3: (1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    4: (2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    5: (2, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    6: (2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    7: (2, 2, 1, 1, 1, 1, 1, 1, 1, 1, 1),
    9: (2, 2, 2, 1, 1, 1, 1, 1, 1, 1, 1),
    19: (4, 3, 3, 2, 2, 2, 1, 1, 1, 1, 1),
    20: (4, 3, 3, 2, 2, 2, 2, 1, 1, 1, 1),
    25: (4, 3, 4, 3, 2, 2, 2, 2, 1, 1, 1),
    26: (4, 4, 4, 3, 2, 2, 2, 2, 1, 1, 1),
    29: (6, 4, 4, 3, 3, 2, 2, 2, 1, 1, 1),
    32: (6, 5, 4, 3, 3, 2, 2, 2, 2, 2, 1),
    35: (6, 5, 4, 4, 3, 3, 2, 2, 2, 2, 1),
    41: (7, 5, 4, 4, 4, 3, 3, 2, 2, 2, 2),
    47: (8, 5, 4, 5, 4, 3, 3, 3, 2, 2, 2),
    49: (8, 5, 4, 5, 4, 3, 3, 3, 2, 2, 2),
    83: (13, 9, 7, 6, 7, 5, 5, 4, 3, 3, 3),
    314: (41, 29, 22, 16, 13, 11, 10, 12, 11, 11, 9),
}

STABLE_FORMS = (
    (1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 1, 4), (1, 2, 2), (1, 1, 5),
    (1, 1, 6), (1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 1, 12), (1, 3, 4),
    (2, 2, 3), (1, 2, 10), (1, 1, 21), (1, 4, 6), (1, 3, 10),
)

REGULAR_FORMS = (
    (1, 1, 1), (1, 1, 2), (1, 1, 3), (1, 1, 4), (1, 1, 5), (1, 1, 6), (1, 2, 2),
    (1, 2, 3), (1, 2, 4), (1, 1, 9), (1, 3, 3), (1, 2, 5), (1, 1, 12), (1, 3, 4),
    (2, 2, 3), (1, 1, 18), (1, 3, 6), (2, 3, 3), (1, 2, 10), (1, 1, 21), (1, 4, 6),
    (1, 5, 5), (1, 3, 9), (1, 3, 10), (1, 3, 12), (1, 4, 9), (1, 6, 6), (3, 3, 4),
    (1, 5, 10), (1, 3, 18), (1, 6, 9), (2, 3, 9), (3, 3, 7), (2, 3, 12), (1, 3, 27),
    (1, 9, 9), (1, 3, 30), (2, 5, 10), (1, 9, 12), (2, 3, 18), (1, 5, 25), (3, 7, 7),
    (2, 5, 15), (1, 6, 27), (1, 9, 18), (1, 9, 21), (1, 21, 21), (5, 6, 15), (3, 7, 63),
)

# Universal forms known since Liouville
LIOUVILLE_FORMS = ((1, 1, 1), (1, 1, 2), (1, 1, 4), (1, 1, 5), (1, 2, 2), (1, 2, 3), (1, 2, 4))

# Forms lying over Delta(1,1,1): regular ones and the least local-but-not-global n of the others.
# s_18 = 235 already fails for Delta(1,9,81), s_9 = 235 for Delta(1,81,81) and s_7 = 155 for Delta(1,49,49).
TREE_OVER_111_CLEAN = ((1, 1, 9), (1, 9, 9))
TREE_OVER_111_REJECTED = {
    (1, 1, 81): 19,
    (1, 9, 81): 18,
    (1, 81, 81): 9,
    (1, 1, 25): 5,
    (1, 25, 25): 5,
    (1, 1, 49): 8,
    (1, 49, 49): 7,
}

# (a, k) -> (lower bound on u_k, resulting bound on c) for the a in [3, 10] exclusion
UK_PAIRS = {
    (10, 5): (5, 29),
    (9, 5): (5, 26),
    (8, 7): (15, 47),
    (7, 7): (11, 41),
    (6, 7): (8, 35),
    (5, 9): (17, 49),
    (4, 13): (31, 83),
    (3, 29): (164, 314),
}

VK_CAPS = {5: 3, 7: 7, 9: 14, 13: 30, 29: 161}

EXCLUSION_C_BOUNDS = {a: c for (a, _), (_, c) in UK_PAIRS.items()}

# Witness sets for the (a, b) = (2, 2) and (2, 3) cases of the stable classification
E_SET_22 = (12, 28, 44, 76, 92, 124)
E_SET_23 = (69, 117, 141, 213, 285, 333)

# Missing-prime witnesses: (a, b) -> n with 8n + a + b not represented by <a, b>
MISSING_PRIME_WITNESSES = {(1, 1): 52, (1, 5): 13}

# Lower bounds produced by the counting lemma: (i, s) -> bound
LOWER_BOUND_CHECKS = {(19, 6): 5, (20, 6): 6, (29, 8): 5, (35, 8): 8, (32, 8): 7}

SHAPE_I_PRIME_CUTOFF = 137

ANISOTROPIC_SETS_OF_STABLE = ((), (3,), (5,), (7,), (3, 5), (3, 7))
