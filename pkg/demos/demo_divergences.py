"""Tour of the builtin divergence functions and their conjugate machinery.

Shows the Fenchel-Young inequality in action, numeric-vs-closed-form
conjugates, the Young truncation with its uniform gap, and the divergence
of discrete measures.
"""

import numpy as np

import divrisk as dr


def main():
    print("=" * 68)
    print("Divergence functions and convex conjugates")
    print("=" * 68)

    for name in ("kl", "chi2", "power:1.5"):
        spec = dr.make_builtin_divergence(name)
        print(f"\n--- {spec.name} ---")
        print(f"  phi(0) = {spec.phi_at_zero:.6f}   phi(1) = {spec.phi(1.0):.1f}"
              f"   Delta2 constants (T, k) = {spec.delta2_constants}")
        for y in (-1.0, 0.0, 1.5):
            closed = spec.psi(y)
            numeric = dr.numeric_conjugate(spec, y)
            print(f"  psi({y:+.1f}) closed = {closed:.10f}   numeric sup = {numeric:.10f}"
                  f"   |diff| = {abs(closed - numeric):.1e}")

        rng = np.random.default_rng(0)
        xs, ys = rng.uniform(0, 20, 2000), rng.uniform(-5, 5, 2000)
        slack = np.asarray(spec.phi(xs)) + np.asarray(spec.psi(ys)) - xs * ys
        print(f"  Fenchel-Young slack over 2000 random pairs: min = {slack.min():.2e} (>= 0)")

        pair = dr.young_pair(spec)
        print(f"  Young truncation: Phi(0.5) = {pair.Phi(0.5):.1f}, Phi(3) = {pair.Phi(3.0):.4f},"
              f" uniform gap d = {pair.d:.6f}")

    print("\n--- divergence balls between discrete measures ---")
    kl = dr.make_builtin_divergence("kl")
    chi2 = dr.make_builtin_divergence("chi2")
    p = np.array([0.5, 0.5])
    for q, label in (
        (np.array([0.5, 0.5]), "q = p"),
        (np.array([0.75, 0.25]), "tilted"),
        (np.array([1.0, 0.0]), "point mass"),
    ):
        print(f"  {label:>10}: D_kl = {dr.discrete_divergence(q, p, kl):.6f}"
              f"   D_chi2 = {dr.discrete_divergence(q, p, chi2):.6f}")


if __name__ == "__main__":
    main()
