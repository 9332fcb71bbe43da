"""Regenerate tests/data/golden_charts.json.

Each catalog case is re-implemented here as a direct lambda over math
functions, written by hand from the displayed component formulas and kept
deliberately independent of the expression-tree path in the package.  The
emitted values are frozen into the repository as derived reference data;
rerun only if the catalog's pinned parameters change.

Profiles are pinned to simple closed forms so both routes are exactly
comparable:
    sum1  : phi = 1.2 (const), psi = s        (0 + 1 = 1)
    diffP : phi = s + 1,       psi = 0.3      (1 - 0 = 1)
    diffM : phi = 1.5 (const), psi = s        (0 - 1 = -1)
    psi   : s^2 or -s^2 per the sign condition
"""

import json
import math
import pathlib

COS, SIN, CH, SH = math.cos, math.sin, math.cosh, math.sinh

PAIR_PROFILES = {
    "sum1": {"phi": "1.2", "psi": "s"},
    "diffP": {"phi": "s + 1", "psi": "0.3"},
    "diffM": {"phi": "1.5", "psi": "s"},
}
PAIR_FNS = {
    "sum1": (lambda s: 1.2, lambda s: s),
    "diffP": (lambda s: s + 1, lambda s: 0.3),
    "diffM": (lambda s: 1.5, lambda s: s),
}

P4 = (0.5, 0.3, -0.2, 0.6)
P4D = (1.0, 0.3, -0.2, 0.6)   # degenerate (psi-bearing) cases
P2 = (0.7, 0.4)
P1 = (0.5,)


def rows():
    out = []

    def pair_case(key, kind, fn, point=P4):
        phi, psi = PAIR_FNS[kind]
        out.append({
            "key": key,
            "point": list(point),
            "profiles": dict(PAIR_PROFILES[kind]),
            "values": list(fn(phi, psi, *point)),
        })

    def pair3_case(key, kind, fn, point=P4):
        phi, psi = PAIR_FNS[kind]
        out.append({
            "key": key,
            "point": list(point),
            "profiles": {"phi1": PAIR_PROFILES[kind]["phi"],
                         "phi2": PAIR_PROFILES[kind]["psi"]},
            "values": list(fn(phi, psi, *point)),
        })

    def psi_case(key, sign, fn, point=P4D, params=None):
        psi = (lambda s: s * s) if sign > 0 else (lambda s: -s * s)
        out.append({
            "key": key,
            "point": list(point),
            "profiles": {"psi": "s^2" if sign > 0 else "-s^2"},
            "parameters": params or {},
            "values": list(fn(psi, *point)),
        })

    def plain_case(key, fn, point, params=None):
        out.append({
            "key": key,
            "point": list(point),
            "parameters": params or {},
            "values": list(fn(*point)),
        })

    pair_case("thm1.i", "sum1",
              lambda f, g, s, t, u, v: (t, u, f(s) * COS(v), f(s) * SIN(v), g(s)))
    pair_case("thm1.ii", "sum1",
              lambda f, g, s, t, u, v: (f(s) * SH(v), t, u, f(s) * CH(v), g(s)))
    pair_case("thm1.iii", "diffM",
              lambda f, g, s, t, u, v: (g(s), t, u, f(s) * COS(v), f(s) * SIN(v)))
    pair_case("thm1.iv", "diffP",
              lambda f, g, s, t, u, v: (f(s) * CH(v), t, u, f(s) * SH(v), g(s)))
    psi_case("thm1.v", +1,
             lambda g, s, t, u, v: (v * v * s / 2 + g(s) + s, t, u, v * s,
                                    v * v * s / 2 + g(s)))
    pair_case("thm1.vi", "diffP",
              lambda f, g, s, t, u, v: (f(s) * COS(v), f(s) * SIN(v), t, u, g(s)))
    pair_case("thm1.vii", "diffM",
              lambda f, g, s, t, u, v: (f(s) * SH(v), g(s), t, u, f(s) * CH(v)))
    psi_case("thm1.viii", -1,
             lambda g, s, t, u, v: (s * v * v / 2 + g(s), s * v, t, u,
                                    s * v * v / 2 + g(s) + s))

    pair_case("thm2.i", "diffP",
              lambda f, g, s, t, u, v: (v, f(s) * CH(t), f(s) * SH(t) * COS(u),
                                        f(s) * SH(t) * SIN(u), g(s)),
              point=(0.5, 0.6, -0.2, 0.6))
    pair_case("thm2.ii", "diffM",
              lambda f, g, s, t, u, v: (v, g(s), f(s) * COS(t),
                                        f(s) * SIN(t) * COS(u), f(s) * SIN(t) * SIN(u)),
              point=(0.5, 0.7, -0.2, 0.6))
    pair_case("thm2.iii", "diffP",
              lambda f, g, s, t, u, v: (f(s) * CH(t) * SIN(u), f(s) * CH(t) * COS(u),
                                        f(s) * SH(t), g(s), v))
    pair_case("thm2.iv", "diffM",
              lambda f, g, s, t, u, v: (g(s), f(s) * SH(t), f(s) * CH(t) * COS(u),
                                        f(s) * CH(t) * SIN(u), v))
    pair_case("thm2.v", "sum1",
              lambda f, g, s, t, u, v: (v, f(s) * SH(t), f(s) * CH(t) * COS(u),
                                        f(s) * CH(t) * SIN(u), g(s)))
    pair_case("thm2.vi", "sum1",
              lambda f, g, s, t, u, v: (f(s) * SH(t) * COS(u), f(s) * SH(t) * SIN(u),
                                        f(s) * CH(t), g(s), v),
              point=(0.5, 0.6, -0.2, 0.6))
    psi_case("thm2.vii", +1,
             lambda g, s, t, u, v: (s * (t * t + u * u) / 2 + g(s), v, s * t, s * u,
                                    s * (t * t + u * u) / 2 + g(s) - s))
    psi_case("thm2.viii", -1,
             lambda g, s, t, u, v: (s * (t * t - u * u) / 2 + g(s), s * t, s * u, v,
                                    s * (t * t - u * u) / 2 + g(s) + s))

    pair3_case("thm3.i", "diffP",
               lambda f, g, s, t, u, v: (g(s) * SH(v), f(s) * CH(t),
                                         f(s) * SH(t) * COS(u), f(s) * SH(t) * SIN(u),
                                         g(s) * CH(v)),
               point=(0.5, 0.6, -0.2, 0.6))
    pair3_case("thm3.ii", "diffM",
               lambda f, g, s, t, u, v: (g(s) * COS(v), g(s) * SIN(v), f(s) * COS(t),
                                         f(s) * SIN(t) * COS(u), f(s) * SIN(t) * SIN(u)),
               point=(0.5, 0.7, -0.2, 0.6))
    pair3_case("thm3.iii", "diffP",
               lambda f, g, s, t, u, v: (f(s) * CH(t) * SIN(u), f(s) * CH(t) * COS(u),
                                         f(s) * SH(t), g(s) * COS(v), g(s) * SIN(v)))
    pair3_case("thm3.iv", "sum1",
               lambda f, g, s, t, u, v: (g(s) * SH(v), f(s) * SH(t),
                                         f(s) * CH(t) * COS(u), f(s) * CH(t) * SIN(u),
                                         g(s) * CH(v)))
    pair3_case("thm3.v", "diffM",
               lambda f, g, s, t, u, v: (g(s) * CH(v), f(s) * SH(t),
                                         f(s) * CH(t) * COS(u), f(s) * CH(t) * SIN(u),
                                         g(s) * SH(v)))
    pair3_case("thm3.vi", "sum1",
               lambda f, g, s, t, u, v: (f(s) * SH(t) * COS(u), f(s) * SH(t) * SIN(u),
                                         f(s) * CH(t), g(s) * COS(v), g(s) * SIN(v)),
               point=(0.5, 0.6, -0.2, 0.6))
    psi_case("thm3.vii", +1,
             lambda g, s, t, u, v: (s * (t * t + u * u - v * v) / 2 - 0.7 * v * v + g(s),
                                    v * (1.4 + s), s * t, s * u,
                                    s * (t * t + u * u - v * v) / 2 - 0.7 * v * v + g(s) - s),
             params={"a": 0.7})
    psi_case("thm3.viii", -1,
             lambda g, s, t, u, v: (s * (t * t - u * u - v * v) / 2 + 0.8 * v * v + g(s),
                                    s * t, s * u, v * (s - 1.6),
                                    s * (t * t - u * u - v * v) / 2 + 0.8 * v * v + g(s) + s),
             point=(0.7, 0.3, -0.2, 0.6), params={"a": 0.8})

    psi_case("ex41", +1,
             lambda g, s, t, u, v: (-1.0 * v * v + 2.0 * u * u
                                    + s * (t * t + u * u - v * v) / 2 + g(s),
                                    v * (s + 2.0), s * t, u * (s + 4.0),
                                    -1.0 * v * v + 2.0 * u * u
                                    + s * (t * t + u * u - v * v) / 2 + g(s) - s),
             params={"a": 1.0, "b": 2.0})

    plain_case("intsurf.i", lambda t, u: (0.0, 0.0, t, u, 0.0), P2)
    plain_case("intsurf.ii",
               lambda t, u: (0.0, 2 * CH(t), 2 * SH(t) * COS(u), 2 * SH(t) * SIN(u), 0.0),
               P2, {"r": 2.0})
    plain_case("intsurf.iii",
               lambda t, u: (0.0, 0.0, 2 * COS(t), 2 * SIN(t) * COS(u), 2 * SIN(t) * SIN(u)),
               P2, {"r": 2.0})
    plain_case("intsurf.iv",
               lambda t, u: (0.8 * t * t + 0.8 * u * u, 0.0, t, u,
                             0.8 * t * t + 0.8 * u * u),
               P2, {"A": 0.8})
    plain_case("intsurf.v",
               lambda t, u: (2 * CH(t) * SIN(u), 2 * CH(t) * COS(u), 2 * SH(t), 0.0, 0.0),
               P2, {"r": 2.0})
    plain_case("intsurf.vi",
               lambda t, u: (0.8 * t * t - 0.8 * u * u, t, u, 0.0,
                             0.8 * t * t - 0.8 * u * u),
               P2, {"A": 0.8})
    plain_case("intsurf.vii",
               lambda t, u: (0.0, 2 * SH(t), 2 * CH(t) * COS(u), 2 * CH(t) * SIN(u), 0.0),
               P2, {"r": 2.0})
    plain_case("intsurf.viii",
               lambda t, u: (2 * SH(t) * COS(u), 2 * SH(t) * SIN(u), 2 * CH(t), 0.0, 0.0),
               P2, {"r": 2.0})

    plain_case("intcurve.A", lambda v: (0.0, 0.0, 0.0, v, 0.0), P1)
    plain_case("intcurve.B",
               lambda v: (0.0, 0.0, COS(2 * v) / 2, SIN(2 * v) / 2, 0.0), P1, {"R": 2.0})
    plain_case("intcurve.C",
               lambda v: (SH(2 * v) / 2, 0.0, 0.0, 0.0, CH(2 * v) / 2), P1, {"R": 2.0})
    plain_case("intcurve.D",
               lambda v: (CH(2 * v) / 2, 0.0, 0.0, 0.0, SH(2 * v) / 2), P1, {"R": 2.0})
    plain_case("intcurve.E",
               lambda v: (0.8 * v * v, 0.0, v, 0.0, 0.8 * v * v), P1, {"a": 0.8})
    plain_case("intcurve.F",
               lambda v: (COS(2 * v) / 2, SIN(2 * v) / 2, 0.0, 0.0, 0.0), P1, {"R": 2.0})
    plain_case("intcurve.G",
               lambda v: (0.8 * v * v, v, 0.0, 0.0, 0.8 * v * v), P1, {"a": 0.8})
    return out


def main():
    data = {
        "comment": "[DERIVED] reference component values, hand-transcribed "
                   "formulas evaluated independently of the package; see "
                   "tools/make_golden.py",
        "rows": rows(),
    }
    target = pathlib.Path(__file__).parent.parent / "tests" / "data" / "golden_charts.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(data, indent=1))
    print(f"wrote {target} ({len(data['rows'])} rows)")


if __name__ == "__main__":
    main()
