"""`fracmatch oracle`: brute-force p and q, and PFM certificates for edge-list files."""

import argparse

from loguru import logger

from fracmatch.commands.common import EXIT_OK, EXIT_VIOLATION, UsageError, add_common, emit, pick
from fracmatch.schemas.hull import PfmCertificate
from fracmatch.schemas.run import RunConfig
from fracmatch.services.arrangement_service import brute_force_p, brute_force_q
from fracmatch.services.edgelist import read_edge_list
from fracmatch.services.formula_service import p_conjectured, q_conjectured
from fracmatch.services.hull_service import has_pfm


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("oracle", help="exact brute-force oracles")
    parser.add_argument("--n", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--q", action="store_true", help="brute-force q(n,k) only")
    parser.add_argument("--p", action="store_true", help="brute-force p(n,k) only")
    parser.add_argument("--pfm", metavar="FILE", help="decide PFM for an edge-list file")
    parser.add_argument("--cap", type=int, help="largest n enumerated")
    parser.add_argument("--edge-cap", type=int, help="largest edge count sent to the LP")
    add_common(parser)
    parser.set_defaults(handler=run)


def _pfm(args: argparse.Namespace, run_config: RunConfig) -> int:
    h = read_edge_list(args.pfm)
    cert = has_pfm(h, edge_cap=pick(args.edge_cap, run_config.oracle.edge_cap))
    if isinstance(cert, PfmCertificate):
        pairs = [
            f"{' '.join(str(v + 1) for v in range(h.n) if e >> v & 1)} -> {x}"
            for e, x in zip(cert.support, cert.alpha)
        ]
        text = "perfect fractional matching\n" + "\n".join(f"  {p}" for p in pairs)
    elif cert.vacuous:
        text = "empty instance: no perfect fractional matching (vacuous separation)"
    else:
        text = f"no perfect fractional matching; separating omega = {[str(w) for w in cert.omega]}"
    emit(args, cert, text)
    return EXIT_OK


def run(args: argparse.Namespace, run_config: RunConfig) -> int:
    if args.pfm:
        return _pfm(args, run_config)
    if args.n is None or args.k is None:
        raise UsageError("oracle needs --n and --k (or --pfm FILE)")
    n, k = args.n, args.k
    cap = pick(args.cap, run_config.oracle.n_cap)
    sides = []
    if args.q or not args.p:
        sides.append(("q", brute_force_q, q_conjectured))
    if args.p or not args.q:
        sides.append(("p", brute_force_p, p_conjectured))
    payload: dict = {}
    lines = []
    mismatch = False
    for side, oracle_fn, formula_fn in sides:
        oracle = oracle_fn(n, k, cap)
        formula = formula_fn(n, k).value
        payload[side] = {"oracle": oracle, "conjectured": formula}
        witness = [str(b) for b in oracle.witness.beta]
        lines.append(
            f"{side}({n},{k}): oracle {oracle.value}, formula {formula}, witness {witness}"
        )
        mismatch |= oracle.value != formula
    emit(args, payload, "\n".join(lines))
    if mismatch:
        logger.error(f"oracle disagrees with the conjectured formula at ({n}, {k})")
        return EXIT_VIOLATION
    return EXIT_OK
