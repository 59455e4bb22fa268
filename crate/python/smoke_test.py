"""Smoke test for the `harmonic` extension module.

Build and install it first:

    pip install --no-build-isolation ./crates/python

then run `python python/smoke_test.py` from the repository root.
"""

import cmath
import math
import sys

import harmonic


def check(name, ok, detail=""):
    print(f"{'ok  ' if ok else 'FAIL'} {name} {detail}")
    return ok


def main():
    results = []

    h3 = harmonic.DensityModel.hyperbolic(2)
    results.append(check("hyperbolic(2) H", h3.h == 2.0 and h3.dim == 3, repr(h3)))
    dr = harmonic.DensityModel.from_config("model = damek-ricci\nm = 2\nk = 1\n")
    results.append(check("damek-ricci(2,1) H", abs(dr.h - 2.0) < 1e-12, repr(dr)))

    lam = 1 + 0.5j
    r, phi, _ = harmonic.spherical_function(h3, lam, 10.0, 200)
    err = max(
        abs(v - (1 if x == 0 else cmath.sin(lam * x) / (lam * math.sinh(x))))
        for x, v in zip(r, phi)
    )
    results.append(check("φ on H³ against sin λr/(λ sinh r)", err < 1e-8, f"{err:.2e}"))

    _, s, _ = harmonic.spherical_function(dr, lam, 8.0, 160, "series")
    _, o, _ = harmonic.spherical_function(dr, lam, 8.0, 160, "ode")
    err = max(abs(a - b) for a, b in zip(s, o))
    results.append(check("series against ODE", err < 1e-8, f"{err:.2e}"))

    line = harmonic.DensityModel.euclidean(0)
    cert = harmonic.certify(line, 1.0, 3.0)
    witness = cert["verdict"].get("l")
    ok = cert["verdict"]["kind"] == "common-zero-found" and abs(witness[0] + (math.pi / 2) ** 2) < 1e-9
    results.append(check("certify(1, 3) rejected", ok, str(witness)))
    cert = harmonic.certify(line, 1.0, math.sqrt(2.0))
    results.append(check("certify(1, √2) accepted", cert["verdict"]["kind"] == "no-common-zero-in-box"))

    err = harmonic.abel_round_trip(h3, 0.4, 0.2)
    results.append(check("Abel round trip", err < 1e-6, f"{err:.2e}"))

    speed = harmonic.wave_speed(dr)
    results.append(check("wave front speed", abs(speed - 1) < 0.02, f"{speed:.4f}"))

    heat = harmonic.heat_check(h3, 0.5, [0.0, 0.5, 1.0])
    results.append(check("heat multipliers", heat["max_rel_err"] < 1e-3, f"{heat['max_rel_err']:.2e}"))

    res = harmonic.geo_check("hyperbolic_plane", "displacement")
    results.append(check("displacement identity on H²", res < 1e-6, f"{res:.2e}"))

    try:
        harmonic.DensityModel.custom(2, "2*r^2")
        results.append(check("bad custom density rejected", False))
    except harmonic.HarmonicError as e:
        results.append(check("bad custom density rejected", True, str(e)))

    if "--suite" in sys.argv:
        report = harmonic.run_suite(quick=True)
        criteria = {c["criterion"] for c in report["checks"]}
        ok = report["failed"] == 0 and criteria == set(range(1, 13))
        results.append(check("quick suite", ok, f"{report['passed']} checks"))

    print(f"{sum(results)} of {len(results)} smoke checks passed")
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
