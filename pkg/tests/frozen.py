"""Reference values computed once with mpmath at 50 digits from closed-form
expressions, independently of the package code."""

ONE_MINUS_H2_0_1 = 0.53100440641071877874641066961667953990283454082189
# log2 4 - H(P) with P_m = C(3, m) 0.1^m 0.9^(3-m)
DEPHASING_D4_P01 = 1.0209530944268685052317415237159490770736535125426
ADDITIVE_XI_HALF_UPPER = 0.27865247955551829632003765949905393128667702292351
ADDITIVE_XI_HALF_IC = -0.44269504088896340735992468100189213742664595415299
# 0.5 * 1 + 0.5 * (-log2 0.2)
LOSS_ENSEMBLE_05_08 = 1.6609640474436811739351597147446950879324156965123
AMP_QL = {
    1.5: 1.5849625007211561814537389439478165087598144076925,
    2.0: 1.0,
    3.0: 0.58496250072115618145373894394781650875981440769248,
    10.0: 0.15200309344504998496284154159375715834520257763962,
}
# -log2(1 - 0.4)
LOSS_04_UPPER = 0.7369655941662061664165804855415736671050169853321
# Pauli weights (0.7, 0.1, 0.1, 0.1)
PAULI_0711_ENTROPY = 1.3567796494470394726609409074271086098161127548483
PAULI_0711_FLUX = 0.3651484454403228752093785220622815660487186381763
LOSS_05_02_UPPER = 0.4199730940219749301258326967520103653530541037936
LOSS_05_02_RCI = 0.2199730940219749301258326967520103653530541037936
AMP_2_05_UPPER = 0.12255624891826572781939158407827523686027838846128
AMP_2_05_IC = -0.37744375108173427218060841592172476313972161153872
DEPOL_F_0_1 = 0.78321322543537232911462541253069463572048590576832
DEPOL_F_0_3 = 0.48403091304112650341782010096829721549790118982103
ERASURE_025_IC = 0.5
ERASURE_025_IRC = -0.061278124459132863909695792039137618430139194230639
ERASURE_025_CHOI_ENTROPY = 1.0612781244591328639096957920391376184301391942306
# interior minimiser of the convexity-improved depolarizing objective (brute force, 2e6 grid)
DEPOL_EPS_STAR = 0.2769215
