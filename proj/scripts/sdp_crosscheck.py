#!/usr/bin/env python3
"""Re-solve dumped SDP instances with cvxpy and compare optimal values."""

import argparse
import pathlib
import subprocess
import sys
import tempfile
import warnings

import cvxpy as cp
import numpy as np


def read_form(tokens, head):
    constant, count = float(head[0]), int(head[1])
    terms = [next(tokens) for _ in range(count)]
    return constant, terms


def load(path):
    lines = iter(pathlib.Path(path).read_text().splitlines())
    assert next(lines) == "sdp-dump 1"
    sense = next(lines).split()[1]
    nb = int(next(lines).split()[1])
    dims = [int(next(lines)) for _ in range(nb)]
    ns = int(next(lines).split()[1])
    uppers = [float(next(lines)) for _ in range(ns)]
    objective = read_form(lines, next(lines).split()[1:])
    nc = int(next(lines).split()[1])
    constraints = []
    for _ in range(nc):
        head = next(lines).split()
        constraints.append((head[0], float(head[1]), read_form(lines, head[2:])))
    assert next(lines) == "end"
    return sense, dims, uppers, objective, constraints


def build(dims, uppers, form, blocks, scalars):
    constant, terms = form
    coef = [np.zeros((n, n), dtype=complex) for n in dims]
    lin = np.zeros(len(uppers))
    for t in terms:
        f = t.split()
        if f[0] == "T":
            b, r, c = int(f[1]), int(f[2]), int(f[3])
            coef[b][r, c] += complex(float(f[4]), float(f[5]))
        else:
            lin[int(f[1])] += float(f[2])
    expr = constant
    for b, k in enumerate(coef):
        if np.any(k):
            expr = expr + cp.real(cp.sum(cp.multiply(k, blocks[b])))
    if len(uppers) and np.any(lin):
        expr = expr + lin @ scalars
    return expr


def solve_dump(path):
    sense, dims, uppers, objective, constraints = load(path)
    blocks = [cp.Variable((n, n), hermitian=True) for n in dims]
    scalars = cp.Variable(len(uppers)) if uppers else None
    cons = [b >> 0 for b in blocks]
    if uppers:
        cons.append(scalars >= 0)
        for i, u in enumerate(uppers):
            if np.isfinite(u):
                cons.append(scalars[i] <= u)
    for kind, rhs, form in constraints:
        e = build(dims, uppers, form, blocks, scalars)
        cons.append({"le": e <= rhs, "ge": e >= rhs, "eq": e == rhs}[kind])
    obj = build(dims, uppers, objective, blocks, scalars)
    prob = cp.Problem(cp.Maximize(obj) if sense == "max" else cp.Minimize(obj), cons)
    prob.solve(solver=cp.CLARABEL)
    if prob.status != cp.OPTIMAL:
        prob.solve(solver=cp.SCS, eps=1e-9, max_iters=200000)
    return prob.status, prob.value


def main():
    warnings.simplefilter("ignore")
    ap = argparse.ArgumentParser()
    ap.add_argument("--generator", required=True)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--tol", type=float, default=1e-5)
    args = ap.parse_args()
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        subprocess.run([args.generator, tmp, str(args.count), str(args.seed)], check=True)
        for i in range(args.count):
            status, ours = pathlib.Path(tmp, f"inst{i}.obj").read_text().split()
            ours = float(ours)
            ref_status, ref = solve_dump(pathlib.Path(tmp, f"inst{i}.txt"))
            rel = abs(ours - ref) / max(1.0, abs(ref))
            ok = status == "optimal" and ref_status == "optimal" and rel <= args.tol
            failures += not ok
            print(f"instance {i}: ours={ours:.10g} ({status}) reference={ref:.10g} ({ref_status}) "
                  f"rel={rel:.2e} {'ok' if ok else 'MISMATCH'}")
    print(f"{args.count - failures}/{args.count} instances agree")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
