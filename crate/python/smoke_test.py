"""Smoke test for the Python bindings.

Build and install the extension first:

    pip install maturin
    maturin develop --release -m crates/python/Cargo.toml
    python python/smoke_test.py
"""

import json
import random

import chebrank


def check(cond, what):
    if not cond:
        raise SystemExit(f"FAIL: {what}")
    print(f"ok   {what}")


def main():
    ident = chebrank.Matrix([[1.0, 0.0], [0.0, 1.0]])
    check(ident.shape == (2, 2), "matrix shape")
    check(bool(chebrank.preserves_chebyshev(ident)), "identity is PC")
    check(not chebrank.preserves_chebyshev(chebrank.Matrix([[1, 1], [0, 1]])), "tie detected")

    t, err = chebrank.mu([3.0, 1.0], [1.0, 1.0])
    check(abs(t - 2.0) < 1e-12 and abs(err - 1.0) < 1e-12, "mu((3,1),(1,1)) = 2")

    run = chebrank.iterate(ident, [1.0, 1.0])
    check(run.converged and run.limit_error == 0.5, "identity fixed point")
    check(chebrank.estimate_e(ident, [1, -1]) == 0.5, "estimate_e identity")

    res = chebrank.optimize(ident)
    check(res.error == 0.5 and res.optimal, "optimize identity 2x2")
    doc = json.loads(res.to_json())
    check(list(doc) == ["error", "u", "v", "runs", "patterns", "certificates", "terminated"], "JSON field order")

    small = chebrank.Matrix.parse("3,2\n1,0.5\n")
    g = chebrank.dependency_graph(small)
    check(g.loops == [0] and g.depth == 2, "dependency graph of [[3,2],[1,0.5]]")
    check(chebrank.optimize(small).runs == 1, "single loop column needs one run")

    rng = random.Random(5)
    a = chebrank.Matrix([[rng.gauss(0, 1) for _ in range(6)] for _ in range(6)])
    best, pattern, per_class = chebrank.exhaustive_optimize(a)
    res = chebrank.optimize(a)
    check(len(per_class) == 32 and pattern.startswith("+"), "exhaustive enumerates 2^(n-1) classes")
    check(abs(res.error - best) <= 1e-9 * max(1.0, best), "optimize matches exhaustive")
    check(abs(a.residual_norm(res.u, res.v) - res.error) < 1e-12, "returned pair attains the error")
    cycle = chebrank.find_alternance(a, res.u, res.v)
    check(cycle is not None and len(cycle) % 2 == 0, "optimum carries an alternance")

    try:
        chebrank.Matrix([[1.0, 2.0]])
    except ValueError as e:
        check("at least 2" in str(e), "shape error raised as ValueError")
    else:
        raise SystemExit("FAIL: 1x2 matrix accepted")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
