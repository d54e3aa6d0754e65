"""Tabulated anti-Laplacians of shifted monomials.

Row k encodes the polynomial U_k with Laplacian(U_k) = (x-z)^alpha(k), for
the linear enumeration k of multiindices with |alpha| <= 10.  Each row is
(indices, numerators, denominator): U_k = sum_i numerators[i]/denominator *
(x-z)^alpha(indices[i]).  Coefficients are exact integers so the rows can be
checked in rational arithmetic; callers convert to float at use.

Two structural facts hold for every row and are enforced by tests: applying
the formal Laplacian returns exactly the target monomial, and the
alternating-sign sum of the numerators is zero.
"""

ANTILAP_MAX_DEGREE = 10

# k: ((indices...), (numerators...), denominator)
ANTILAP_TABLE = {
    0: ((3, 5), (1, 1), 4),
    1: ((6, 8), (1, 1), 8),
    2: ((7, 9), (1, 1), 8),
    3: ((10, 12, 14), (7, 6, -1), 96),
    4: ((11, 13), (1, 1), 12),
    5: ((10, 12, 14), (-1, 6, 7), 96),
    6: ((15, 17, 19), (3, 2, -1), 64),
    7: ((16, 18, 20), (11, 10, -1), 192),
    8: ((15, 17, 19), (-1, 10, 11), 192),
    9: ((16, 18, 20), (-1, 2, 3), 64),
    10: ((21, 23, 25, 27), (31, 15, -15, 1), 960),
    11: ((22, 24, 26), (13, 10, -3), 320),
    12: ((21, 23, 25, 27), (-1, 15, 15, -1), 360),
    13: ((22, 24, 26), (-3, 10, 13), 320),
    14: ((21, 23, 25, 27), (1, -15, 15, 31), 960),
    15: ((28, 30, 32, 34), (9, 3, -5, 1), 384),
    16: ((29, 31, 33, 35), (57, 35, -21, 1), 1920),
    17: ((28, 30, 32, 34), (-3, 63, 55, -11), 1920),
    18: ((29, 31, 33, 35), (-11, 55, 63, -3), 1920),
    19: ((28, 30, 32, 34), (1, -21, 35, 57), 1920),
    20: ((29, 31, 33, 35), (1, -5, 3, 9), 384),
    21: ((36, 38, 40, 42, 44), (127, 28, -70, 28, -1), 7168),
    22: ((37, 39, 41, 43), (15, 7, -7, 1), 672),
    23: ((36, 38, 40, 42, 44), (-99, 2772, 2030, -812, 29), 107520),
    24: ((37, 39, 41, 43), (-1, 7, 7, -1), 280),
    25: ((36, 38, 40, 42, 44), (29, -812, 2030, 2772, -99), 107520),
    26: ((37, 39, 41, 43), (1, -7, 7, 15), 672),
    27: ((36, 38, 40, 42, 44), (-1, 28, -70, 28, 127), 7168),
    28: ((45, 47, 49, 51, 53), (85, 12, -42, 28, -3), 6144),
    29: ((46, 48, 50, 52, 54), (247, 84, -126, 36, -1), 14336),
    30: ((45, 47, 49, 51, 53), (-73, 2628, 1554, -1036, 111), 129024),
    31: ((46, 48, 50, 52, 54), (-489, 4564, 3906, -1116, 31), 215040),
    32: ((45, 47, 49, 51, 53), (31, -1116, 3906, 4564, -489), 215040),
    33: ((46, 48, 50, 52, 54), (111, -1036, 1554, 2628, -73), 129024),
    34: ((45, 47, 49, 51, 53), (-1, 36, -126, 84, 247), 14336),
    35: ((46, 48, 50, 52, 54), (-3, 28, -42, 12, 85), 6144),
    36: ((55, 57, 59, 61, 63, 65), (511, 45, -210, 210, -45, 1), 46080),
    37: ((56, 58, 60, 62, 64), (251, 60, -126, 60, -5), 18432),
    38: ((55, 57, 59, 61, 63, 65), (-233, 10485, 4830, -4830, 1035, -23), 645120),
    39: ((56, 58, 60, 62, 64), (-191, 2292, 1638, -780, 65), 129024),
    40: ((55, 57, 59, 61, 63, 65), (1, -45, 210, 210, -45, 1), 12600),
    41: ((56, 58, 60, 62, 64), (65, -780, 1638, 2292, -191), 129024),
    42: ((55, 57, 59, 61, 63, 65), (-23, 1035, -4830, 4830, 10485, -233), 645120),
    43: ((56, 58, 60, 62, 64), (-5, 60, -126, 60, 251), 18432),
    44: ((55, 57, 59, 61, 63, 65), (1, -45, 210, -210, 45, 511), 46080),
    45: ((66, 68, 70, 72, 74, 76), (93, 5, -30, 42, -15, 1), 10240),
    46: ((67, 69, 71, 73, 75, 77), (1013, 165, -462, 330, -55, 1), 92160),
    47: ((66, 68, 70, 72, 74, 76), (-11, 605, 210, -294, 105, -7), 46080),
    48: ((67, 69, 71, 73, 75, 77), (-53, 795, 462, -330, 55, -1), 53760),
    49: ((66, 68, 70, 72, 74, 76), (29, -1595, 9570, 8106, -2895, 193), 645120),
    50: ((67, 69, 71, 73, 75, 77), (193, -2895, 8106, 9570, -1595, 29), 645120),
    51: ((66, 68, 70, 72, 74, 76), (-1, 55, -330, 462, 795, -53), 53760),
    52: ((67, 69, 71, 73, 75, 77), (-7, 105, -294, 210, 605, -11), 46080),
    53: ((66, 68, 70, 72, 74, 76), (1, -55, 330, -462, 165, 1013), 92160),
    54: ((67, 69, 71, 73, 75, 77), (1, -15, 42, -30, 5, 93), 10240),
    55: ((78, 80, 82, 84, 86, 88, 90), (2047, 66, -495, 924, -495, 66, -1), 270336),
    56: ((79, 81, 83, 85, 87, 89), (509, 55, -198, 198, -55, 3), 56320),
    57: ((78, 80, 82, 84, 86, 88, 90),
         (-1981, 130746, 33165, -61908, 33165, -4422, 67), 12165120),
    58: ((79, 81, 83, 85, 87, 89), (-681, 12485, 5742, -5742, 1595, -87), 1013760),
    59: ((78, 80, 82, 84, 86, 88, 90),
         (743, -49038, 367785, 259644, -139095, 18546, -281), 28385280),
    60: ((79, 81, 83, 85, 87, 89), (3, -55, 198, 198, -55, 3), 16632),
    61: ((78, 80, 82, 84, 86, 88, 90),
         (-281, 18546, -139095, 259644, 367785, -49038, 743), 28385280),
    62: ((79, 81, 83, 85, 87, 89), (-87, 1595, -5742, 5742, 12485, -681), 1013760),
    63: ((78, 80, 82, 84, 86, 88, 90),
         (67, -4422, 33165, -61908, 33165, 130746, -1981), 12165120),
    64: ((79, 81, 83, 85, 87, 89), (3, -55, 198, -198, 55, 509), 56320),
    65: ((78, 80, 82, 84, 86, 88, 90), (-1, 66, -495, 924, -495, 66, 2047), 270336),
}
