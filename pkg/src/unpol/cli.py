"""Command-line interface: ``unpol make|check|moments|commutant|transform``.

Exit codes: 0 success / unpolarized, 1 polarized (or commutant anomaly),
2 usage or input error.  Documents go to stdout unless ``--out`` is given;
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    DEFAULT_TOL,
    MAX_MOMENT_ORDER,
    commutant_dimension,
    is_unpolarized,
    monte_carlo_invariance,
    stokes_moment_tensor,
)
from .io import StateFileError, dumps_document, dumps_state, load_state
from .states import fock_vector, pure_density, thermal_state, unpolarized_state
from .transforms import evolution, haar_random_su2, random_lossless

EXIT_OK = 0
EXIT_POLARIZED = 1
EXIT_USAGE = 2
MAX_COMMUTANT_N = 12


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _make(args) -> int:
    if args.kind == "vacuum":
        rho = unpolarized_state([1.0] + [0.0] * args.n_max)
    elif args.kind == "thermal":
        if args.mean_photons is None:
            raise UsageError("thermal states need --mean-photons")
        rho = thermal_state(args.mean_photons, args.n_max)
    elif args.kind == "unpolarized":
        if not args.weights:
            raise UsageError("unpolarized states need --weights")
        weights = list(args.weights) + [0.0] * max(0, args.n_max + 1 - len(args.weights))
        rho = unpolarized_state(weights)
    else:
        if not args.amplitude:
            raise UsageError("pure states need at least one --amplitude NA NB VALUE")
        amps = {}
        for n_a, n_b, value in args.amplitude:
            try:
                occ = (int(n_a), int(n_b))
                amps[occ] = amps.get(occ, 0) + complex(value.replace("i", "j"))
            except ValueError:
                raise UsageError(f"bad amplitude {n_a} {n_b} {value}") from None
        n_max = max(args.n_max, max(sum(occ) for occ in amps))
        psi = fock_vector(amps, n_max)
        if args.normalize:
            psi = psi / np.linalg.norm(psi)
        rho = pure_density(psi)
        if rho.coherences_discarded:
            print("warning: coherences between photon numbers were discarded",
                  file=sys.stderr)
    _emit(dumps_state(rho, args.label or args.kind), args.out)
    return EXIT_OK


def _check(args) -> int:
    rho = load_state(args.state)
    report = is_unpolarized(rho, args.tol)
    deviations = {family: monte_carlo_invariance(rho, args.trials, args.seed, family)
                  for family in ("linear", "general")}
    doc = {
        "tool": "unpol",
        "version": __version__,
        "state": str(args.state),
        "seed": args.seed,
        "trials": args.trials,
        "tol": args.tol,
        "verdict": "unpolarized" if report.verdict else "polarized",
        "scalar_verdict": report.scalar_verdict,
        "commutator_verdict": report.commutator_verdict,
        "block_scalar_residuals": report.block_scalar_residuals.tolist(),
        "block_tolerances": report.thresholds().tolist(),
        "commutator_norms": {f"L{k + 1}": row.tolist()
                             for k, row in enumerate(report.commutator_norms)},
        "monte_carlo_max_deviation": deviations,
    }
    _emit(dumps_document(doc), args.out)
    return EXIT_OK if report.verdict else EXIT_POLARIZED


def _moments(args) -> int:
    if not 1 <= args.order <= MAX_MOMENT_ORDER:
        raise UsageError(f"--order must be in 1..{MAX_MOMENT_ORDER}")
    rho = load_state(args.state)
    tensor = stokes_moment_tensor(rho, args.order)
    doc = {
        "order": tensor.order,
        "entries": [{"index": list(idx), "value": [value.real, value.imag]}
                    for idx, value in tensor.labelled()],
    }
    _emit(dumps_document(doc), args.out)
    return EXIT_OK


def _commutant(args) -> int:
    lo, hi = args.n_min, args.n_max
    if lo < 0 or hi < lo or hi > MAX_COMMUTANT_N:
        raise UsageError(f"need 0 <= --n-min <= --n-max <= {MAX_COMMUTANT_N}")
    lines = ["n dimension"]
    anomalies = 0
    for n in range(lo, hi + 1):
        dim = commutant_dimension(n)
        flag = "" if dim == 1 else " ANOMALY"
        anomalies += dim != 1
        lines.append(f"{n} {dim}{flag}")
    lines.append(f"anomalies: {anomalies}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if anomalies == 0 else EXIT_POLARIZED


def _transform(args) -> int:
    rho = load_state(args.state)
    if args.angles is not None:
        unitary = evolution(args.angles, rho.n_max)
    elif args.random is not None:
        unitary = haar_random_su2(args.random, rho.n_max)
    else:
        unitary = random_lossless(args.random_lossless, rho.n_max)
    _emit(dumps_state(rho.transformed(unitary)), args.out)
    return EXIT_OK


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unpol", description="Two-mode polarization algebra and unpolarized-light checks.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    make = sub.add_parser("make", help="write a state file")
    make.add_argument("kind", choices=["vacuum", "thermal", "unpolarized", "pure"])
    make.add_argument("--n-max", type=int, default=0)
    make.add_argument("--mean-photons", type=float, help="thermal: mean photons per mode")
    make.add_argument("--weights", type=float, nargs="+",
                      help="unpolarized: weight r_n per basis state of manifold n = 0, 1, ...")
    make.add_argument("--amplitude", nargs=3, action="append", metavar=("NA", "NB", "VALUE"),
                      help="pure: amplitude of |NA,NB> (repeatable; VALUE like 0.5 or 0.3+0.4j)")
    make.add_argument("--normalize", action="store_true", help="pure: rescale to unit norm")
    make.add_argument("--label")
    make.add_argument("--out")
    make.set_defaults(func=_make)

    check = sub.add_parser("check", help="test a state for unpolarization")
    check.add_argument("state")
    check.add_argument("--tol", type=float, default=DEFAULT_TOL,
                       help="per-block tolerance, scaled by block dimension")
    check.add_argument("--trials", type=int, default=200)
    check.add_argument("--seed", type=_seed, required=True)
    check.add_argument("--out")
    check.set_defaults(func=_check)

    moments = sub.add_parser("moments", help="Stokes moment tensor")
    moments.add_argument("state")
    moments.add_argument("--order", type=int, required=True)
    moments.add_argument("--out")
    moments.set_defaults(func=_moments)

    commutant = sub.add_parser("commutant", help="commutant dimension of {L2, L3} per manifold")
    commutant.add_argument("--n-min", type=int, default=0)
    commutant.add_argument("--n-max", type=int, required=True)
    commutant.add_argument("--out")
    commutant.set_defaults(func=_commutant)

    transform = sub.add_parser("transform", help="apply a lossless transformation")
    transform.add_argument("state")
    which = transform.add_mutually_exclusive_group(required=True)
    which.add_argument("--angles", type=float, nargs=3, metavar=("PHI1", "PHI2", "PHI3"))
    which.add_argument("--random", type=_seed, metavar="SEED",
                       help="Haar-random linear (SU(2)) transformation")
    which.add_argument("--random-lossless", type=_seed, metavar="SEED",
                       help="independent Haar-random unitary per manifold")
    transform.add_argument("--out")
    transform.set_defaults(func=_transform)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be at least 1")
    if getattr(args, "n_max", 0) < 0:
        parser.error("--n-max must be nonnegative")
    try:
        return args.func(args)
    except (UsageError, StateFileError, ValueError) as exc:
        print(f"unpol {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
