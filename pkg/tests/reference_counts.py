"""Expected set sizes for the reference workbook runs.

Keyed by (n, M, tau); values are ((P, Q, W) initial, (P, Q, W) final).
These are the published counts the sieve must reproduce exactly.
"""

from __future__ import annotations

# Target (9,96,4): three strength rows, every cell tabulated.
TABLE_96 = {
    (4, 96, 4): ((1, 0, 1), (1, 0, 1)),
    (5, 96, 4): ((6, 1, 7), (6, 1, 7)),
    (6, 96, 4): ((12, 4, 16), (12, 4, 16)),
    (7, 96, 4): ((20, 12, 32), (10, 6, 16)),
    (8, 96, 4): ((34, 41, 75), (9, 11, 20)),
    (9, 96, 4): ((37, 97, 134), (0, 0, 0)),
    (3, 48, 3): ((1, 0, 1), (1, 0, 1)),
    (4, 48, 3): ((6, 1, 7), (6, 1, 7)),
    (5, 48, 3): ((13, 4, 17), (13, 4, 17)),
    (6, 48, 3): ((31, 13, 44), (25, 9, 34)),
    (7, 48, 3): ((53, 41, 94), (38, 30, 68)),
    (8, 48, 3): ((96, 110, 206), (62, 85, 147)),
    (2, 24, 2): ((1, 0, 1), (1, 0, 1)),
    (3, 24, 2): ((6, 1, 7), (6, 1, 7)),
    (4, 24, 2): ((13, 5, 18), (13, 5, 18)),
    (5, 24, 2): ((30, 19, 49), (28, 17, 45)),
    (6, 24, 2): ((49, 54, 103), (47, 52, 99)),
    (7, 24, 2): ((74, 130, 204), (69, 125, 194)),
}

# Target (10,192,5): tabulated strength-5 row (the lower rows coincide with
# the (9,96,4) workbook's rows).
TABLE_192 = {
    (5, 192, 5): ((1, 0, 1), (1, 0, 1)),
    (6, 192, 5): ((6, 1, 7), (6, 1, 7)),
    (7, 192, 5): ((12, 4, 16), (12, 4, 16)),
    (8, 192, 5): ((21, 12, 33), (8, 4, 12)),
    (9, 192, 5): ((35, 32, 67), (4, 4, 8)),
    (10, 192, 5): ((35, 85, 120), (0, 0, 0)),
}

# Target (11,112,4): tabulated columns of the three strength rows.  The
# rightmost cell of each row ((11,112,4), (10,56,3), (9,28,2)) is not
# tabulated in the reference tables.
TABLE_112 = {
    (4, 112, 4): ((1, 0, 1), (1, 0, 1)),
    (5, 112, 4): ((7, 1, 8), (7, 1, 8)),
    (6, 112, 4): ((15, 5, 20), (13, 3, 16)),
    (7, 112, 4): ((31, 17, 48), (12, 6, 18)),
    (8, 112, 4): ((58, 59, 117), (16, 18, 34)),
    (9, 112, 4): ((72, 158, 230), (9, 24, 33)),
    (10, 112, 4): ((88, 373, 461), (0, 0, 0)),
    (3, 56, 3): ((1, 0, 1), (1, 0, 1)),
    (4, 56, 3): ((7, 1, 8), (7, 1, 8)),
    (5, 56, 3): ((17, 4, 21), (16, 3, 19)),
    (6, 56, 3): ((49, 15, 64), (40, 14, 54)),
    (7, 56, 3): ((95, 59, 154), (68, 44, 112)),
    (8, 56, 3): ((199, 181, 380), (135, 129, 264)),
    (9, 56, 3): ((311, 451, 762), (193, 313, 506)),
    (2, 28, 2): ((1, 0, 1), (1, 0, 1)),
    (3, 28, 2): ((7, 1, 8), (7, 1, 8)),
    (4, 28, 2): ((17, 5, 22), (17, 4, 21)),
    (5, 28, 2): ((46, 23, 69), (43, 22, 65)),
    (6, 28, 2): ((87, 79, 166), (82, 76, 158)),
    (7, 28, 2): ((145, 205, 350), (137, 195, 332)),
    (8, 28, 2): ((208, 469, 677), (196, 450, 646)),
}

# Target (11,224,5): tabulated strength-5 row (columns n = 7..11; the
# first two columns are not tabulated).
TABLE_224 = {
    (7, 224, 5): ((15, 4, 19), (11, 2, 13)),
    (8, 224, 5): ((32, 16, 48), (4, 2, 6)),
    (9, 224, 5): ((63, 47, 110), (5, 4, 9)),
    (10, 224, 5): ((74, 141, 215), (2, 4, 6)),
    (11, 224, 5): ((108, 337, 445), (0, 0, 0)),
}
