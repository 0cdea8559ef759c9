"""Verdicts of the main probabilistic inequality over the whole log range of k."""
from math import factorial

from diagbase import bounds as B

# (name, |T|, |Out|, h)
GROUPS = [("M11", 7920, 1, 48), ("A7", 2520, 2, 120), ("L2(13)", 1092, 2, 14),
          ("A21", factorial(21) // 2, 2, factorial(19))]


def main():
    for name, order, out, h in GROUPS:
        ks = range(5, B.log_range_max(order) + 1)
        verdicts = [B.prob_check(order, out, h, k).verdict for k in ks]
        holds = [k for k, v in zip(ks, verdicts) if v == "holds"]
        span = f"{holds[0]}..{holds[-1]}" if holds else "none"
        print(f"{name:7} k=5..{ks[-1]:<3} holds for {len(holds)}/{len(ks)} (k in {span}); "
              f"inconclusive: {verdicts.count('inconclusive')}")


if __name__ == "__main__":
    main()
