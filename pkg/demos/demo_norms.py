"""The norm zoo: divergence norm, Luxemburg, Orlicz and the dual norm.

Demonstrates the factor-2 Orlicz/Luxemburg sandwich, the Young-gap sandwich
tying the divergence norm to its truncated counterpart, the truncation
function behind the dual norm, and Hoelder pairing.
"""

import numpy as np

import divrisk as dr
from divrisk.norms import young_norm_bound


def main():
    rng = np.random.default_rng(9)
    dist = dr.EmpiricalDistribution(atoms=np.round(rng.normal(0, 1.5, 8), 3),
                                    probs=np.full(8, 0.125))
    chi2 = dr.make_builtin_divergence("chi2")
    pair = dr.young_pair(chi2)
    beta = 0.5

    print(f"atoms = {dist.atoms}")
    rep = dr.norm_report(dist, chi2, beta, pair=pair, trace_points=8)
    print(f"\ndivergence norm  rho(|X|)            = {rep.phi_beta_norm:.6f}")
    print(f"Luxemburg norm   (Young function)    = {rep.luxemburg:.6f}")
    print(f"Orlicz norm      (Amemiya form)      = {rep.orlicz:.6f}")
    print(f"dual norm        (truncation search) = {rep.dual_norm:.6f}")
    print(f"sandwich: {rep.luxemburg:.6f} <= {rep.orlicz:.6f} <= {2 * rep.luxemburg:.6f}")

    young_norm = dr.evaluate_primal(dist.map_atoms(np.abs), pair.spec, beta).value
    bound = young_norm_bound(dist, pair)
    psi1 = float(pair.Psi(1.0))
    print(f"\nYoung-risk norm (conjugate swapped in) = {young_norm:.6f}")
    print(f"one-variable bound = {bound:.6f} within "
          f"[{young_norm / max(1, beta):.6f}, {(psi1 + 1) / min(1, beta) * young_norm:.6f}]")
    lo = beta / (beta + pair.d) * rep.phi_beta_norm
    hi = (beta + pair.d) / beta * rep.phi_beta_norm
    print(f"Young-gap sandwich with d = {pair.d:.3f}: {lo:.6f} <= {young_norm:.6f} <= {hi:.6f}")

    print("\ntruncation levels behind the dual norm (E max{c, |Z|/lambda} = 1):")
    for lam, c in rep.c_lambda_trace:
        w = np.abs(dist.atoms)
        check = np.dot(dist.probs, np.maximum(c, w / lam))
        print(f"  lambda = {lam:8.4f}  c = {c:.6f}  E max = {check:.12f}")

    print("\nHoelder pairing |E XZ| <= ||X|| * ||Z||*:")
    for _ in range(3):
        z = rng.normal(0, 1, 8)
        dz = dr.EmpiricalDistribution(atoms=z, probs=dist.probs)
        lhs = abs(np.dot(dist.probs, dist.atoms * z))
        rhs = rep.phi_beta_norm * dr.dual_norm(dz, chi2, beta)
        print(f"  {lhs:10.6f} <= {rhs:10.6f}")


if __name__ == "__main__":
    main()
