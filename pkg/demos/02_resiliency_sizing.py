"""How many random representatives are enough? Exact hypergeometric tail,
its normal approximation, and the closed-form sizing rule."""

import math

from r2csim import n_alpha, resiliency_exact, resiliency_normal

N = 80


def main():
    print(f"Pr[fewer than 1/3 of sampled validators are faulty], N = {N}\n")
    print(f"{'n_tilde':>8} | " + " | ".join(f"F={f} exact / normal" for f in (5, 15, 25)))
    for n_tilde in range(10, 71, 10):
        cells = []
        for f in (5, 15, 25):
            cells.append(
                f"{resiliency_exact(N, f, n_tilde):.4f} / "
                f"{resiliency_normal(N, f, n_tilde):.4f}"
            )
        print(f"{n_tilde:>8} | " + " | ".join(f"{c:>19}" for c in cells))

    print("\nsizing for 0.99-resiliency (smallest representative count):")
    for f in (0, 5, 15, 25):
        na = n_alpha(N, f, 0.99)
        nt = math.ceil(na)
        achieved = resiliency_exact(N, f, nt)
        print(f"  F = {f:>2}: n_alpha = {na:7.3f} -> n_tilde = {nt:>2}, "
              f"exact resiliency {achieved:.4f}")

    print("\nF >= N/3 is infeasible for any representative count:")
    try:
        n_alpha(N, 27, 0.99)
    except Exception as exc:
        print(f"  F = 27: {exc}")


if __name__ == "__main__":
    main()
