"""Summarize the inequality audits: violations and minimum slack per cell."""
import argparse

from hopflap.audits import AuditConfig, run_audits, summarize


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--sections", type=int, default=100)
    ap.add_argument("--max-m", type=int, default=32)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfg = AuditConfig(ks=tuple(args.ks), n_sections=args.sections, max_m=args.max_m, seed=args.seed)
    summary = summarize(run_audits(cfg))
    print(f"{'inequality':<22}{'k':>4}{'p':>6}{'n':>6}{'viol':>6}{'min slack':>12}")
    for (name, k, p), info in sorted(summary.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2] or 0)):
        p_txt = "-" if p is None else f"{p:g}"
        print(f"{name:<22}{k:>4}{p_txt:>6}{info['count']:>6}{info['violations']:>6}{info['min_slack']:>12.4f}")


if __name__ == "__main__":
    main()
