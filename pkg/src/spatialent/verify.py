"""Oracle certificates over a (T, <N>) grid, collected into a JSON-able report."""
import math

import numpy as np

from . import oracle
from .entanglement import chi_norm_squared, chi_norm_squared_exact, pure_pair_entropy
from .regions import OverlapTable, RegionSplit, overlap_table
from .thermo import thermal_state

DEFAULT_TEMPERATURES = (0.05, 0.5, 1.0, 3.0, 10.0)
DEFAULT_N_VALUES = (1.0, 10.0, 100.0)
LOWER_BOUND_SLACK = 1e-9


def mirror_signs(sectors):
    """Diagonal +-1 map taking the region-B basis onto the mirror image of A.

    At a = 0 the Lowdin bases of A and B are related by x -> -x up to a sign
    (-1)^i on one-particle mode i, so two-particle state (i, j) picks up
    (-1)^(i+j).
    """
    signs = [1.0]
    signs += [(-1.0) ** i for i in range(sectors.rank)]
    signs += [(-1.0) ** (i + j) for i, j in sectors.pairs]
    return np.array(signs)


def _check(name, passed, **fields):
    return {"name": name, "pass": bool(passed), **fields}


def _scaled(table, scale):
    return OverlapTable(table.split, table.pA * scale, table.gram_a * scale, table.gram_b * scale)


def verify_point(T, N, K, gram_scale=None):
    """All oracle certificates at one grid point; returns (checks, diagnostics)."""
    split = RegionSplit(0.0)
    thermal = thermal_state(T, N, K_max=K)
    table = overlap_table(K, split)
    if gram_scale is not None:
        table = _scaled(table, gram_scale)
    rho = oracle.build_rho2_matrix(thermal, split, K)
    m, da, db = rho.matrix, rho.dim_a, rho.dim_b
    where = {"T": T, "N": N, "K": K}
    checks = []

    checks.append(_check("trace_unit", abs(np.trace(m) - 1.0) <= 1e-10,
                         value=float(np.trace(m)), reference=1.0, **where))
    asym = float(np.abs(m - m.T).max())
    checks.append(_check("hermitian", asym <= 1e-12, value=asym, **where))
    evals = np.linalg.eigvalsh(m)
    checks.append(_check("positive_semidefinite", evals[0] >= -1e-12, value=float(evals[0]), **where))
    signs = np.kron(mirror_signs(rho.basis.sectors_a), mirror_signs(rho.basis.sectors_b))
    mirrored = oracle.swap_subsystems(signs[:, None] * m * signs[None, :], da, db)
    sym = float(np.abs(mirrored - m).max())
    checks.append(_check("ab_swap_symmetry", sym <= 1e-10, value=sym, **where))
    pt = oracle.partial_transpose(m, da, db)
    invol = float(np.abs(oracle.partial_transpose(pt, da, db) - m).max())
    checks.append(_check("partial_transpose_involution", invol == 0.0, value=invol, **where))

    neg = oracle.exact_negativity(rho)
    rank2 = oracle.rank2_part_eigenvalue(thermal, table, K, "weighted")
    checks.append(_check("lower_bound", neg >= rank2 - LOWER_BOUND_SLACK,
                         value=neg, reference=rank2, **where))
    block = oracle.coherence_block_eigenvalue(rho)
    checks.append(_check("rank2_matches_pt_block", math.isclose(rank2, block, rel_tol=1e-10, abs_tol=1e-14),
                         value=rank2, reference=block, **where))
    n = thermal.n
    M = oracle.pair_normalization(n)
    lam_exact = math.sqrt(max(chi_norm_squared_exact(n, table), 0.0)) / M
    checks.append(_check("exact_chi_formula", math.isclose(lam_exact, block, rel_tol=1e-10, abs_tol=1e-14),
                         value=lam_exact, reference=block, **where))

    lam_printed = math.sqrt(chi_norm_squared(n, table)) / M
    bare = oracle.rank2_part_eigenvalue(thermal, table, K, "bare")
    diagnostics = {
        **where,
        "exact_negativity": neg,
        "rank2_weighted": rank2,
        "rank2_bare": bare,
        "lambda_printed": lam_printed,
        "lambda_exact": lam_exact,
        "printed_rel_diff": (lam_printed - block) / block if block else None,
        "gap": neg - rank2,
    }
    return checks, diagnostics


def pure_state_checks(K, tol=1e-8):
    split = RegionSplit(0.0)
    top = min(K - 1, 3)
    grams = oracle.region_grams(split, top + 1)
    out = []
    for k in range(top + 1):
        for l in range(k + 1):
            s = pure_pair_entropy(k, l, split)
            ref = oracle.pure_pair_entropy_oracle(k, l, split, grams)
            out.append(_check("pure_state_entropy", abs(s - ref) <= tol, value=s, reference=ref, k=k, l=l))
    return out


def run_verification(K=3, temperatures=DEFAULT_TEMPERATURES, n_values=DEFAULT_N_VALUES, gram_scale=None):
    """Run every certificate; ``gram_scale`` corrupts the overlap table (test hook)."""
    checks, diagnostics = [], []
    for T in temperatures:
        for N in n_values:
            c, d = verify_point(float(T), float(N), K, gram_scale)
            checks.extend(c)
            diagnostics.append(d)
    checks.extend(pure_state_checks(K))
    failed = [c for c in checks if not c["pass"]]
    return {
        "K": K,
        "temperatures": [float(t) for t in temperatures],
        "n_values": [float(x) for x in n_values],
        "gram_scale": gram_scale,
        "n_checks": len(checks),
        "n_failed": len(failed),
        "passed": not failed,
        "checks": checks,
        "diagnostics": diagnostics,
    }
