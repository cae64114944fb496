"""Benchmark eigenvalues lambda_k sqrt|Omega|, k = 0..11, used as regression targets."""

DISK_N16 = [0, 1.772453850905515, 1.772453850905515, 3.544907701811031, 3.544907701811031,
            5.317361552716547, 5.317361552716547, 7.089815403622062, 7.089815403622062,
            8.862269254527577, 8.862269254527577, 10.634723105433094]

# w + 0.05 w^3 at N = 128
TWO_FOLD_N128 = [0, 1.643146123280268, 1.904409864772950, 3.509482552385548, 3.567218976359050,
                 5.298764805372439, 5.316931688027557, 7.074238491011197, 7.078792636301953,
                 8.844970458352106, 8.846297249970162, 10.614565359883118]

# 8 + 5 w + 0.5 w^6 at N = 256
FIVE_FOLD_N256 = [0, 1.614651852650946, 1.614651852650962, 2.977377367029736, 2.977377367029792,
                  5.483378986124044, 5.483378986124095, 6.707738797416523, 6.707738797416656,
                  7.657739809178596, 9.019582922738280, 10.138973824227390]

# Cassini oval, alpha = 0.4, at N = 256
CASSINI_N256 = [0, 0.821583899177118, 2.888537785769291, 2.944846615497959, 3.341726289664183,
                4.550747949109708, 5.036739639826136, 6.233053526961343, 6.325490988924451,
                7.805807719443767, 7.908416105951900, 9.404227647278619]

# Cassini lambda_1 at N = 16, 64 and the N = 1024 reference
CASSINI_LAMBDA1 = {16: 0.872759997500228, 64: 0.821644770560566, 1024: 0.821583899177230}

# maximiser of lambda_2 sqrt|Omega|
OPT_K2_LAMBDA = 2.916071256633050
OPT_K2_COEFFS = {1: 3.482625488377397, 3: 1.316760069380197, 5: 0.754288548863893}
