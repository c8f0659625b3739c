"""Command-line interface.

Subcommands: bounds, multiplicity, scheme, sweep-dof, schedule-sim,
compare-tx.  Exit codes: 0 success, 2 configuration error, 3 certificate
failure rate above the allowed threshold.  The RNG seed resolves as
--seed flag > MACDOF_SEED environment variable > config file > 0.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from . import scheduler as sched_mod
from .configfile import load_config
from .exceptions import ConfigurationError, MacdofError
from .harness import run_sweep
from .multiplicity import multiplicity_formula, multiplicity_numeric
from .network import realize_uplink
from .schemes import NSIA_GENERAL, NSIA_TWO_CELL, RX_ZF, TX_ZF, build_scheme, certify
from .textmat import design_matrices, write_matrices

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CERT_FAILURE = 3

_SCHEME_ALIASES = {"tx-zf": TX_ZF, "nsia": NSIA_TWO_CELL, "rx-zf": RX_ZF}


def _resolve_seed(flag_seed, config_seed) -> int:
    if flag_seed is not None:
        return int(flag_seed)
    env = os.environ.get("MACDOF_SEED")
    if env is not None:
        return int(env)
    return int(config_seed)


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _cmd_bounds(args) -> int:
    cfg, _ = load_config(args.config)
    payload = {"config": {"L": cfg.L, "K": cfg.K, "beta": cfg.beta}}
    payload["general"] = bounds_mod.outer_bound_general(cfg).as_dict()
    if cfg.is_homogeneous:
        payload["config"].update({"M": cfg.M, "N": cfg.N})
        payload["homogeneous"] = bounds_mod.outer_bound_homogeneous(cfg).as_dict()
    _emit(payload)
    return EXIT_OK


def _cmd_multiplicity(args) -> int:
    if args.verify:
        report = multiplicity_numeric(args.n, args.m, args.K, seed=args.seed or 0)
    else:
        report = multiplicity_formula(args.n, args.m, args.K)
    _emit(
        {
            "n": report.n,
            "m": report.m,
            "K": report.K,
            "gamma": report.gamma,
            "mu": report.mu,
            "verified_numerically": report.verified_numerically,
        }
    )
    return EXIT_OK


def _scheme_id(args) -> tuple[str, int | None]:
    scheme = _SCHEME_ALIASES[args.scheme]
    if args.gamma is not None:
        if scheme != NSIA_TWO_CELL:
            raise ConfigurationError("--gamma only applies to the nsia scheme")
        return NSIA_GENERAL, int(args.gamma)
    return scheme, None


def _cmd_scheme(args) -> int:
    cfg, run = load_config(args.config)
    seed = _resolve_seed(args.seed, run["seed"])
    scheme, gamma = _scheme_id(args)
    channels = realize_uplink(cfg, seed, args.trial)
    try:
        design = build_scheme(scheme, channels, gamma=gamma)
    except MacdofError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        _emit({"scheme": scheme, "gamma": gamma, "constructed": False, "error": str(exc)})
        return EXIT_CERT_FAILURE
    cert = certify(design, channels)
    if args.dump_design:
        header = f"scheme={scheme} gamma={gamma} seed={seed} trial={args.trial}"
        write_matrices(args.dump_design, design_matrices(design), header=header)
    _emit(
        {
            "scheme": scheme,
            "gamma": gamma,
            "constructed": True,
            "passed": cert.passed,
            "residual_max": cert.residual_max,
            "ranks_ok": cert.ranks_ok,
            "achieved_streams": cert.achieved_streams,
            "per_cell": [
                {
                    "cell": d.cell,
                    "combiner_rank": d.combiner_rank,
                    "decode_rank": d.decode_rank,
                    "residual_max": d.residual_max,
                }
                for d in cert.per_cell
            ],
        }
    )
    return EXIT_OK if cert.passed else EXIT_CERT_FAILURE


def _cmd_sweep(args) -> int:
    cfg, run = load_config(args.config)
    seed = _resolve_seed(args.seed, run["seed"])
    trials = args.trials if args.trials is not None else run["trials"]
    scheme, gamma = _scheme_id(args)
    result = run_sweep(
        cfg,
        scheme,
        trials=trials,
        seed=seed,
        gamma=gamma,
        threads=args.threads,
        out_dir=args.out_dir,
    )
    _emit(result.as_dict())
    failure_rate = 1.0 - result.certificates_passed
    return EXIT_OK if failure_rate <= args.max_failure_rate else EXIT_CERT_FAILURE


def _cmd_schedule_sim(args) -> int:
    snr_db = tuple(float(tok) for tok in args.snr_db_list.split(","))
    rho0 = 10.0 ** (snr_db[0] / 10.0)
    constant = rho0**args.a / args.users0
    rows = ["snr_db,trial,users,sum_rate_bits," + ",".join(
        f"selected_{m},rho_sigma_{m}" for m in range(args.L)
    )]
    summary_points = []
    for idx, db in enumerate(snr_db):
        rho = 10.0 ** (db / 10.0)
        users = sched_mod.users_for_snr(rho, args.a, constant)
        interf_samples = []
        rate_acc = 0.0
        for t in range(args.trials):
            rng = np.random.default_rng([args.seed & 0xFFFFFFFFFFFFFFFF, idx + 1, t])
            detail = sched_mod.simulate_trial(rng, args.L, users, rho, args.scheduler)
            interf_samples.extend(detail.interference)
            rate_acc += detail.sum_rate
            cells = ",".join(
                f"{detail.selected[m]},{detail.interference[m]:.12e}" for m in range(args.L)
            )
            rows.append(f"{db:.6f},{t},{users},{detail.sum_rate:.12e},{cells}")
        mean_theory = rho / ((args.L - 1) * users)
        arr = np.array(interf_samples)
        summary_points.append(
            {
                "snr_db": db,
                "users": users,
                "normalized_sum_rate": rate_acc / args.trials / float(np.log2(rho)),
                "mean_interference_empirical": float(arr.mean()),
                "mean_interference_theory": mean_theory,
                "second_moment_empirical": float(np.mean(arr**2)),
                "second_moment_theory": 2.0 * mean_theory**2,
            }
        )
    summary = {
        "L": args.L,
        "a": args.a,
        "scheduler": args.scheduler,
        "trials": args.trials,
        "seed": args.seed,
        "baseline_dof": args.L - 1,
        "target_dof": args.L,
        "points": summary_points,
    }
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "schedule_sim.csv").write_text("\n".join(rows) + "\n")
        (out / "schedule_sim.json").write_text(json.dumps(summary, indent=2) + "\n")
    _emit(summary)
    return EXIT_OK


def _cmd_compare_tx(args) -> int:
    dist, shared, ok = bounds_mod.compare_dist_vs_shared(args.M)
    _emit(
        {
            "M": args.M,
            "sigma_dist": {"exact": f"{dist.numerator}/{dist.denominator}", "value": float(dist)},
            "sigma_shared": {"exact": f"{shared.numerator}/{shared.denominator}", "value": float(shared)},
            "shared_wins_or_ties": ok,
        }
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macdof",
        description="Degrees-of-freedom bounds, linear schemes, and Monte Carlo sweeps "
        "for multicell multiuser MIMO networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="evaluate DoF outer bounds for a network config")
    p.add_argument("--config", required=True)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("multiplicity", help="null-space multiplicity report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--verify", action="store_true", help="verify numerically on random samples")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=_cmd_multiplicity)

    p = sub.add_parser("scheme", help="build and certify one scheme realization")
    p.add_argument("--config", required=True)
    p.add_argument("--scheme", choices=sorted(_SCHEME_ALIASES), required=True)
    p.add_argument("--gamma", type=int, default=None, help="multiplicity for the generalized nsia scheme")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--dump-design", default=None, help="write precoders/combiners to a text file")
    p.set_defaults(func=_cmd_scheme)

    p = sub.add_parser("sweep-dof", help="Monte Carlo sum-rate sweep and DoF slope fit")
    p.add_argument("--config", required=True)
    p.add_argument("--scheme", choices=sorted(_SCHEME_ALIASES), required=True)
    p.add_argument("--gamma", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out-dir", default=None)
    p.add_argument("--max-failure-rate", type=float, default=0.0)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("schedule-sim", help="downlink multiuser-diversity simulation")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--a", type=float, required=True, help="user growth exponent: K grows like rho^a")
    p.add_argument("--snr-db-list", required=True, help="comma-separated SNR grid in dB")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scheduler", choices=sorted(sched_mod.SCHEDULERS), default=sched_mod.MIN_INTERF)
    p.add_argument("--users0", type=int, default=10, help="users per cell at the first SNR point")
    p.add_argument("--out-dir", default=None)
    p.set_defaults(func=_cmd_schedule_sim)

    p = sub.add_parser("compare-tx", help="distributed vs selected-and-shared transmission")
    p.add_argument("--M", type=int, required=True)
    p.set_defaults(func=_cmd_compare_tx)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MacdofError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERT_FAILURE


if __name__ == "__main__":
    raise SystemExit(main())
