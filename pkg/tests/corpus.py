"""Generator maps used across the acceptance and invariance suites."""

from plurihull.pluriharmonic import PluriharmonicMap

M = PluriharmonicMap.from_real_parts

BIDISK = {
    "re_z1": M("z1"),
    "squares": M("z1^2", "z2^2"),
    "z1z2_and_z1": M("z1 z2", "z1"),
    "z1_and_z2sq": M("z1", "z2^2"),
    "face_z1_eq_1": M("z1 z2 - z2", "z1 z2^2 - z2^2"),
    "mixed_cubic": M("z1 z2^2", "z1^2 + z2"),
}

TORUS = {
    "line_c_1": M("z1 + z2"),
    "line_c_i": M("z1 + (0,1) z2"),
    "line_c_generic": M("z1 + (1/2,1/3) z2"),
    "line_c_2": M("z1 + 2 z2"),
}
