"""Smoke test for the geolab extension module.

Build and install first:
    pip install maturin
    pip install --no-build-isolation -e crates/python
then run `python python/smoke_test.py`.
"""

import math

import geolab


def close(a, b, tol):
    assert abs(a - b) < tol, f"{a} vs {b} (tol {tol})"


def check_periods():
    p, t0, t1 = geolab.period(0.5, 0.999)
    close(p, 6.28842, 5e-3)
    closed, _, _ = geolab.period(0.5, 0.6, closed=True)
    numeric, _, _ = geolab.period(0.5, 0.6)
    close(closed, numeric, 1e-6)
    try:
        geolab.period(0.3, 0.6, closed=True)
    except geolab.GeolabError:
        pass
    else:
        raise AssertionError("closed form accepted alpha=0.3")


def check_geodesics():
    times, pos, tan = geolab.geodesic(0.5, [0.0, 0.0, 1.0], 3.0)
    close(pos[-1][2], 3.0, 1e-10)
    _, q, drift = geolab.cylinder_invariant(0.5, 0.5, 10.0)
    assert drift < 1e-6
    data = geolab.curvature_data(0.5)
    close(data["scalar"], -1.5, 1e-14)
    assert data["XY"] == (0.5, 0.0, -0.5, 0.25)


def check_torsion():
    n = 64
    tau = [10 + 0.5 * math.sin(2 * math.pi * j / n) for j in range(n)]
    times, frames = geolab.torsion_evolve(tau, 0.2, [0.0, 0.1, 0.2])
    assert len(frames) == 3 and len(frames[0]) == n
    a0, b0 = geolab.torsion_invariants(frames[0])
    a1, b1 = geolab.torsion_invariants(frames[-1])
    close(a1 / a0, 1.0, 1e-8)
    close(b1 / b0, 1.0, 1e-8)
    tau1 = geolab.stationary_torsion(128)
    assert max(abs(v) for v in geolab.torsion_rhs(tau1)) < 1e-6
    record, err = geolab.cdf_transform(tau1)
    assert err < 1e-8 and record["u_periodicity"] < 1e-8
    _, s = geolab.helix_stability(0.01, 1.0, 32, 0.5)
    close(s[0], 0.0177245, 1e-6)


def check_csf():
    circle = geolab.PlaneCurve.circle(1.0, 128)
    frames, reason = geolab.csf_evolve(circle, t_end=0.1, frame_dt=0.05)
    assert reason == "time reached", reason
    close(frames[-1].diagnostics["total_area"], math.pi * 0.8, 2e-3)
    eight = geolab.PlaneCurve.lemniscate(256)
    d = eight.diagnostics()
    close(d["alpha_angle"], math.pi / 4, 1e-3)
    frames, _ = geolab.csf_evolve(eight, area_floor=0.5, frame_dt=0.01, symmetric=True)
    lengths = [f.diagnostics["length"] for f in frames]
    assert all(b < a for a, b in zip(lengths, lengths[1:]))
    ratio, distance = frames[-1].bowtie()
    assert 0.5 < ratio < 1.0 and distance > 0.0


def check_acceptance():
    status, detail = geolab.run_criterion(9)
    assert status == "PASS", detail


if __name__ == "__main__":
    for check in (check_periods, check_geodesics, check_torsion, check_csf, check_acceptance):
        check()
        print(f"ok  {check.__name__}")
    print("smoke test passed")
