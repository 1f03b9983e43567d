"""Frozen reference values for the test suite.

Golden matrices are transcribed by hand.  The ``*_STEIN`` and
``*_FINITE_INVERSE`` tables were produced by ``derive_reference.py``
(exact rational arithmetic) and frozen here; entries are strings so no
precision is lost before conversion.
"""

from fractions import Fraction

import numpy as np


def mat(rows, scale=1):
    return np.array([[float(Fraction(x) * Fraction(scale)) for x in r] for r in rows])


# three-mode unstable system: eigenvalues 2, 1/3, 1/4
THREE_MODE_COEFFS = [Fraction(-1, 6), Fraction(5, 4), Fraction(-31, 12), Fraction(1)]
THREE_MODE_EIGS = [2.0, 1 / 3, 1 / 4]

THREE_MODE_SUB = [
    mat([[8, 10, 17], [10, 8, 10], [17, 10, 8]], Fraction(-12, 35)),
    mat([[9, 15, 41], [15, 9, 15], [41, 15, 9]], Fraction(-18, 55)),
    mat([["16", "34", "128.5"], ["34", "16", "34"], ["128.5", "34", "16"]], Fraction(24, 385)),
]

_P11 = mat([[1, 2, 4], [2, 4, 8], [4, 8, 16]], Fraction(-48, 35 ** 2))
_P12 = mat([[18, 21, 37], [21, 12, 14], [37, 14, 8]], Fraction(-72, 175))
_P22 = mat([[81, 27, 9], [27, 9, 3], [9, 3, 1]], Fraction(18, 25))
_P23 = mat([[288, 84, 25], [84, 24, 7], [25, 7, 2]], Fraction(-72, 385))
_P33 = mat([[256, 64, 16], [64, 16, 4], [16, 4, 1]], Fraction(48, 245))
_P31 = mat([[32, 36, 65], [36, 16, 18], [65, 18, 8]], Fraction(36, 245))
THREE_MODE_PAIRS = [[_P11, _P12, _P31], [_P12, _P22, _P23], [_P31, _P23, _P33]]

THREE_MODE_INV_SUB = [
    mat([[24, -91, 145], [-91, 98, -91], [145, -91, 24]], Fraction(-1, 1680)),
    mat([[8, -27, 10], [-27, 81, -27], [10, -27, 8]], Fraction(-11, 90)),
    mat([[12, -35, 13], [-35, 98, -35], [13, -35, 12]], Fraction(55, 336)),
]

# (i, j) -> matrix; only the printed pairs
THREE_MODE_INV_PAIRS = {
    (0, 0): mat([[1, -7, 12], [-7, 49, -84], [12, -84, 144]], Fraction(-1, 14700)),
    (0, 1): mat([[4, -23, 28], [-23, 126, -136], [28, -136, 96]], Fraction(11, 1050)),
    (1, 1): mat([[4, -18, 8], [-18, 81, -36], [8, -36, 16]], Fraction(121, 450)),
    (1, 2): mat([[8, -32, 14], [-32, 126, -55], [14, -55, 24]], Fraction(-11, 42)),
    (2, 2): mat([[4, -14, 6], [-14, 49, -21], [6, -21, 9]], Fraction(605, 588)),
}

# double-pair system: 3 and 1/2, each of multiplicity 2
DOUBLE_PAIR_COEFFS = [Fraction(9, 4), Fraction(-21, 2), Fraction(61, 4), Fraction(-7), Fraction(1)]
DOUBLE_PAIR_EIGS = [3.0, 0.5]
DOUBLE_PAIR_M = mat([[1, 0, 1, 0], [3, 1, "1/2", 1], [9, 6, "1/4", 1], [27, 27, "1/8", "3/4"]])
DOUBLE_PAIR_M_INV = mat([[17, -72, 84, -16], [-15, 65, -80, 20],
                         [108, 72, -84, 16], [-90, 240, -130, 20]], Fraction(1, 125))
DOUBLE_PAIR_TOEPLITZ = [mat([[4, -11], [0, 4]], Fraction(1, 64)),
                        mat([[3, -32], [0, 3]], Fraction(64, 27))]
DOUBLE_PAIR_HANKEL = [mat([[-4, 5], [5, 0]], Fraction(4, 125)),
                      mat([[4, 5], [5, 0]], Fraction(4, 125))]
DOUBLE_PAIR_PARTS = [
    mat([[1377, 519, 193, 71], [3591, 1377, 519, 193],
         [9153, 3591, 1377, 519], [22599, 9153, 3591, 1377]], Fraction(-1, 2000)),
    mat([[116, 352, 944, 2368], [28, 116, 352, 944],
         [-1, 28, 116, 352], [-8, -1, 28, 116]], Fraction(-16, 3375)),
]
DOUBLE_PAIR_INV_PARTS = [
    mat([[-388, 1708, -2176, 624], [1312, -5792, 7424, -2176],
         [-1021, 4511, -5792, 1708], [231, -1021, 1312, -388]], Fraction(1, 125)),
    mat([[-639, 1974, -1103, 172], [4086, -12651, 7072, -1103],
         [-7263, 22608, -12651, 1974], [2268, -7263, 4086, -639]], Fraction(3, 2000)),
]

# -- frozen exact-oracle output ----------------------------------------------
THREE_MODE_STEIN = mat([["-258/55", "-342/55", "-618/55"], ["-342/55", "-258/55", "-342/55"], ["-618/55", "-342/55", "-258/55"]])
THREE_MODE_TOEPLITZ = np.array([float(Fraction(x)) for x in ["-258/55", "-342/55", "-618/55"]])
_FINITE_INVERSE_ROWS = {
    3: [["665/72", "-93/16", "5/4"], ["-93/16", "1105/144", "-31/12"], ["5/4", "-31/12", "1"]],
    4: [["1022531/192096", "-37781/8004", "1523/1334"], ["-37781/8004", "707753/96048", "-20435/8004"], ["1523/1334", "-20435/8004", "665/667"]],
    5: [["162500771/37003212", "-213833485/49337616", "4508159/4111468"], ["-213833485/49337616", "1066971347/148012848", "-31259837/12334404"], ["4508159/4111468", "-31259837/12334404", "1022531/1027867"]],
    6: [["128798208319/31397498496", "-65839755889/15698749248", "1411174225/1308229104"], ["-65839755889/15698749248", "168151724051/23548123872", "-4956377039/1962343656"], ["1411174225/1308229104", "-4956377039/1962343656", "162500771/163528638"]],
    7: [["37445019680777/9336265995960", "-77419054955279/18672531991920", "1668614101229/1556044332660"], ["-77419054955279/18672531991920", "132869795795599/18672531991920", "-3925008095089/1556044332660"], ["1668614101229/1556044332660", "-3925008095089/1556044332660", "128798208319/129670361055"]],
    8: [["129755318643270391/32576567388094368", "-3738250100022715/904904649669288", "121064060064094/113113081208661"], ["-3738250100022715/904904649669288", "38590145994017657/5429427898015728", "-1140772240889339/452452324834644"], ["121064060064094/113113081208661", "-1140772240889339/452452324834644", "37445019680777/37704360402887"]],
    9: [["8836628035055596/2222952759237159", "-16308292805605531/3951916016421616", "24306895252861165/22723517094424292"], ["-16308292805605531/3951916016421616", "252709618992787543/35567244147794544", "-171855738232367999/68170551283272876"], ["24306895252861165/22723517094424292", "-171855738232367999/68170551283272876", "129755318643270391/130660223292939679"]],
    10: [["6265689522559045253/1577066151489174720", "-1084350809449004879/262844358581529120", "23426172537339019/21903696548460760"], ["-1084350809449004879/262844358581529120", "175064787317952313/24641658617018355", "-952482270824117647/377838765460948110"], ["23426172537339019/21903696548460760", "-952482270824117647/377838765460948110", "35346512140222384/35593506891248735"]],
}
DOUBLE_PAIR_STEIN = mat([["-535/432", "-833/432", "-1975/432", "-4865/432"], ["-833/432", "-535/432", "-833/432", "-1975/432"], ["-1975/432", "-833/432", "-535/432", "-833/432"], ["-4865/432", "-1975/432", "-833/432", "-535/432"]])
DOUBLE_PAIR_STEIN_INVERSE = mat([["-65/16", "133/8", "-305/16", "21/4"], ["133/8", "-1045/16", "70", "-305/16"], ["-305/16", "70", "-1045/16", "133/8"], ["21/4", "-305/16", "133/8", "-65/16"]])
THREE_MODE_FINITE_INVERSE = {t: mat(r) for t, r in _FINITE_INVERSE_ROWS.items()}
