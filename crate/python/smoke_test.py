"""Smoke test for the pyrisfd extension module.

Build and run from the repository root:

    cargo build -p risfd-py --release --features extension-module
    cp target/release/libpyrisfd.so python/pyrisfd.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pyrisfd  # noqa: E402


def close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


def main():
    p = pyrisfd.SystemParams(elements=64, kappa=0.1, omega_i=0.1, snr_db=20.0)
    assert p.bits_per_symbol() == 1
    assert close(p.rho_linear(), 100.0, 1e-12)

    mu, var = pyrisfd.moments_r(64)
    assert close(mu, 64 * math.pi / 4, 1e-12)
    assert close(var, 64 * (32 - math.pi**2) / 16, 1e-12)

    vs = pyrisfd.effective_noise(p)
    assert close(vs, 0.1 + 0.01 * 64 * (1 - math.pi**2 / 16) + 0.01, 1e-12)

    gcq = pyrisfd.upep_gcq(mu, var, vs, 5)
    ref = pyrisfd.upep_reference(mu, var, vs)
    assert 0 < ref < gcq < 1.05 * ref, (gcq, ref)
    assert pyrisfd.abep_union_bound(gcq, 2) == gcq
    assert pyrisfd.abep_union_bound(gcq, 4) == 2 * gcq
    assert pyrisfd.abep(p) == gcq

    far = p.with_snr_db(60.0)
    assert close(pyrisfd.upep_gcq(mu, var, pyrisfd.effective_noise(far), 5),
                 pyrisfd.upep_asymptotic(far), 1e-2)

    # conditional PEP is the Gaussian Q-function of the scaled distance
    q = 0.5 * math.erfc(math.sqrt(4.0 / (2 * (0.1 + 0.2 + 1.0))) / math.sqrt(2))
    assert close(pyrisfd.cpep(4.0, 0.2, 0.1, 1.0), q, 1e-12)

    mc = pyrisfd.SystemParams(elements=16, snr_db=-10.0, trials=20_000, seed=7)
    pt = pyrisfd.estimate_ber(mc)
    assert pt.ci_low <= pt.ber <= pt.ci_high
    sweep = pyrisfd.run_sweep(mc, [-10.0, 0.0], workers=2)
    assert sweep[0].ber == pt.ber and len(sweep) == 2

    try:
        pyrisfd.SystemParams(tx_antennas=3)
    except ValueError as e:
        assert "power of two" in str(e)
    else:
        raise AssertionError("n_t = 3 accepted")

    print("pyrisfd smoke test passed:", p, sweep[0])


if __name__ == "__main__":
    main()
