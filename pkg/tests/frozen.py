"""Oracle values frozen from ``derive_oracles.py`` (independent of the package).

Inputs: the unit circle is the 360-gon ``circle:1:360`` sampled at m
arc-length midpoints; the snowflaked segment has 100 vertices, one sample
each; comparable triples come from ``oracles.comparable_triples(10_000, 3,
seed=20240)``; Cantor sums use every center with weight 4**-level, A=3,
centered at the first center with R=2 (the whole set).
"""

CIRCLE_GLOBAL = {
    100: 15.425022793653016,
    200: 15.435493465484786,
    400: 15.4384204784479,
}

# Exact unit circle: triple-excess integral and the beta_2 of the radius-2
# ball that holds the whole circle (the largest ball value of a family with
# A=2). The recorded cap allows 2% for polygon and quadrature error.
CIRCLE_EXCESS_INTEGRAL = 101.86151524868863
CIRCLE_WHOLE_BALL_BETA2 = 2.5231616482189643
BETA2_CAP = 1.02 * CIRCLE_WHOLE_BALL_BETA2

SNOWFLAKE_GLOBAL_M100 = 918.9214641488461
SNOWFLAKE_LENGTH_M100 = 9.9498743710662

COMPARABLE_SEED = 20240
COMPARABLE_EXCESS_OVER_CURV = (0.027815115823770078, 0.31976680903028887)
COMPARABLE_BETA_OVER_EXCESS = (0.020557371971683298, 0.04646880067543461)

CANTOR_HAHLOMAA = {
    2: 2.834757246783514,
    3: 4.375110861703059,
    4: 5.923314207783916,
}
