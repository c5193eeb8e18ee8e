from hypothesis import settings

from eigenroot.dsl import parse_operator

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

T1_TEXT = "z*D + z*D^2 + z*D^3 + z*D^4 + z*D^5"
T2_TEXT = "z^2*D^2 + D^7"
T3_TEXT = "z^3*D^3 + z^2*D^4 + z*D^5"
HERMITE_TEXT = "z*D + D^2"

T1 = parse_operator(T1_TEXT)
T2 = parse_operator(T2_TEXT)
T3 = parse_operator(T3_TEXT)
HERMITE = parse_operator(HERMITE_TEXT)
