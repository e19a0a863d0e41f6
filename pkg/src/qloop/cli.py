"""Command-line interface.

Matrices are read from JSON files of the form ``{"n": 2, "entries": [[i, j, a], ...]}``
(or any form accepted by ``PerMatrix.from_json``).  Output is sorted JSON.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from . import hall, loopalg, schur, stab
from .afmat import PerMatrix
from .aperiodic import conjecture_report

MIN_N, MAX_N = 2, 4
MAX_BAND = 4


class InputError(Exception):
    pass


@dataclass
class Config:
    n: int | None
    r: int | None
    seed: int
    jobs: int
    max_dim: int
    band: int
    output: str | None

    def validate(self):
        if self.n is not None and not MIN_N <= self.n <= MAX_N:
            raise InputError(f"--n must lie in [{MIN_N}, {MAX_N}], got {self.n}")
        if not 0 <= self.max_dim <= hall.MAX_DIM:
            raise InputError(f"--max-dim must lie in [0, {hall.MAX_DIM}], got {self.max_dim}")
        if not 1 <= self.band <= MAX_BAND:
            raise InputError(f"--band must lie in [1, {MAX_BAND}], got {self.band}")
        if self.jobs < 1:
            raise InputError("--jobs must be positive")


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------


def _load_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: cannot read ({e.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def load_matrix(path: str, cfg: Config) -> PerMatrix:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected an object with fields 'n' and 'entries'")
    for fld in ("n", "entries"):
        if fld not in data:
            raise InputError(f"{path}: missing field '{fld}'")
    try:
        A = PerMatrix.from_json(data)
    except (TypeError, ValueError, KeyError) as e:
        raise InputError(f"{path}: field 'entries': {e}") from None
    if cfg.n is not None and A.n != cfg.n:
        raise InputError(f"{path}: field 'n' is {A.n} but --n is {cfg.n}")
    if not MIN_N <= A.n <= MAX_N:
        raise InputError(f"{path}: field 'n' must lie in [{MIN_N}, {MAX_N}]")
    return A


def load_velem(path: str, cfg: Config) -> loopalg.VElem:
    """A loop algebra element, or a plain matrix read as the symbol A(0, 0)."""
    data = _load_json(path)
    if isinstance(data, dict) and "terms" in data:
        try:
            x = loopalg.VElem.from_json(data)
        except (TypeError, ValueError, KeyError) as e:
            raise InputError(f"{path}: field 'terms': {e}") from None
        if cfg.n is not None and x.n != cfg.n:
            raise InputError(f"{path}: field 'n' is {x.n} but --n is {cfg.n}")
        return x
    A = load_matrix(path, cfg)
    if not A.in_theta_pm():
        raise InputError(f"{path}: field 'entries': loop algebra symbols need a zero diagonal")
    return loopalg.VElem.symbol(A)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _terms(elem) -> list:
    return [{"matrix": A.to_json()["entries"], "coeff": str(c)} for A, c in elem.items()]


def _emit(obj, cfg: Config):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_hall(args, cfg: Config):
    A, B = load_matrix(args.A, cfg), load_matrix(args.B, cfg)
    for M in (A, B):
        if M.items() and not M.in_theta_plus():
            raise InputError("Hall algebra inputs must be strictly upper matrices")
        if hall.total_dim(M) > cfg.max_dim:
            raise InputError(f"dimension {hall.total_dim(M)} exceeds --max-dim {cfg.max_dim}")
    prod = hall.hall_mul(hall.HallElem.basis(A), hall.HallElem.basis(B))
    return {"basis": "tight", "A": A.to_json()["entries"], "B": B.to_json()["entries"], "product": _terms(prod)}


def _schur_pair(args, cfg: Config):
    B, A = load_matrix(args.B, cfg), load_matrix(args.A, cfg)
    for M in (A, B):
        if not M.in_theta():
            raise InputError("Schur algebra inputs need nonnegative entries")
        if M.span() > cfg.band:
            raise InputError(f"entries beyond --band {cfg.band}")
    return B, A


def cmd_schur_mul(args, cfg: Config):
    B, A = _schur_pair(args, cfg)
    if cfg.r is not None and A.level() != cfg.r:
        raise InputError(f"level of A is {A.level()}, not --r {cfg.r}")
    prod = schur.SchurElem(A.n, A.level(), schur.basis_product(B, A))
    return {"r": A.level(), "product": _terms(prod)}


def cmd_canon(args, cfg: Config):
    A = load_matrix(args.A, cfg)
    if not A.in_theta():
        raise InputError("canon needs nonnegative entries")
    if cfg.r is not None and A.level() != cfg.r:
        raise InputError(f"level of A is {A.level()}, not --r {cfg.r}")
    return {"r": A.level(), "theta": _terms(schur.canonical_r(A))}


def cmd_loop_mul(args, cfg: Config):
    x, y = load_velem(args.X, cfg), load_velem(args.Y, cfg)
    prod = x * y
    out = {"product": prod.to_json()}
    if cfg.r is not None:
        out["truncation"] = {"r": cfg.r, "terms": _terms(loopalg.truncate(prod, cfg.r))}
    return out


def cmd_stab_mul(args, cfg: Config):
    B, A = load_matrix(args.B, cfg), load_matrix(args.A, cfg)
    for M in (A, B):
        if not M.in_theta_tilde():
            raise InputError("off-diagonal entries must be nonnegative")
    res = stab.stab_mul(B, A)
    out = {
        "constants": [{"matrix": X.to_json()["entries"], "coeff": c.to_json(), "text": repr(c)} for X, c in res.items()],
        "at_w_equal_1": _terms(res.at_one()),
    }
    if args.check_p:
        checks = stab.check_stabilization(B, A, args.check_p)
        out["specializations"] = [{"p": p, "r": r, "agrees": ok} for p, r, ok in checks]
    return out


def cmd_canon_k(args, cfg: Config):
    A = load_matrix(args.A, cfg)
    if not A.in_theta_tilde():
        raise InputError("off-diagonal entries must be nonnegative")
    return {"theta": _terms(stab.canonical_K(A))}


def cmd_lusztig_check(args, cfg: Config):
    return conjecture_report(cfg.n or 2, args.max_norm, args.diag_lo, args.diag_hi, args.r_max)


def cmd_verify(args, cfg: Config):
    from . import verify

    opts = {"seed": cfg.seed, "band": cfg.band, "max_dim": min(cfg.max_dim, 4)}
    sys.stderr.write(f"seed {cfg.seed}\n")
    if args.suite == "all":
        results = verify.run_all(jobs=cfg.jobs, **opts)
    else:
        results = [verify.run_suite(args.suite, **opts)]
    for res in results:
        sys.stderr.write(res.line() + "\n")
    failed = [res for res in results if not res.passed]
    for res in failed:
        sys.stderr.write(f"reproduce: qloop verify {res.name} --seed {cfg.seed}\n")
    return {"seed": cfg.seed, "suites": [res.to_json() for res in results]}, (1 if failed else 0)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None, help="number of vertices (2..4)")
    common.add_argument("--r", type=int, default=None, help="level for Schur algebra commands")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for verify all")
    common.add_argument("--max-dim", type=int, default=4, help="cap on Hall module dimension")
    common.add_argument("--band", type=int, default=2, help="cap on |j - i| for Schur inputs")
    common.add_argument("-o", "--output", default=None, help="write JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="qloop", description="Exact computations in affine quantum Schur "
                                "algebras and the quantum loop algebra of gl_n.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("hall", parents=[common], help="tight Hall product u_A u_B")
    s.add_argument("A")
    s.add_argument("B")
    s.set_defaults(func=cmd_hall)

    s = sub.add_parser("schur-mul", parents=[common], help="[B][A] in an affine Schur algebra")
    s.add_argument("B")
    s.add_argument("A")
    s.set_defaults(func=cmd_schur_mul)

    s = sub.add_parser("canon", parents=[common], help="canonical basis element of a Schur algebra")
    s.add_argument("A")
    s.set_defaults(func=cmd_canon)

    s = sub.add_parser("loop-mul", parents=[common], help="product in the loop algebra realization")
    s.add_argument("X")
    s.add_argument("Y")
    s.set_defaults(func=cmd_loop_mul)

    s = sub.add_parser("stab-mul", parents=[common], help="stabilized product of two basis symbols")
    s.add_argument("B")
    s.add_argument("A")
    s.add_argument("--check-p", type=int, default=0, help="compare with this many Schur levels")
    s.set_defaults(func=cmd_stab_mul)

    s = sub.add_parser("canon-k", parents=[common], help="canonical basis element of the stabilized algebra")
    s.add_argument("A")
    s.set_defaults(func=cmd_canon_k)

    s = sub.add_parser("lusztig-check", parents=[common], help="aperiodic canonical basis report")
    s.add_argument("--max-norm", type=int, default=3)
    s.add_argument("--r-max", type=int, default=None)
    s.add_argument("--diag-lo", type=int, default=-1)
    s.add_argument("--diag-hi", type=int, default=2)
    s.set_defaults(func=cmd_lusztig_check)

    from .verify import SUITES

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("suite", choices=sorted(SUITES) + ["all"])
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    cfg = Config(args.n, args.r, args.seed, args.jobs, args.max_dim, args.band, args.output)
    random.seed(cfg.seed)
    try:
        cfg.validate()
        result = args.func(args, cfg)
    except (InputError, ValueError) as e:
        sys.stderr.write(f"qloop: error: {e}\n")
        return 2
    status = 0
    if isinstance(result, tuple):
        result, status = result
    _emit(result, cfg)
    return status


if __name__ == "__main__":
    sys.exit(main())
