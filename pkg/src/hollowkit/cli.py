"""Command-line entry point.

Exit status: 0 on success, 1 when a construction's hypotheses fail or a
certificate does not verify, 2 on bad input.  Results go to standard output
(or ``--out``) as JSON with floats printed to 17 significant digits.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import List, Optional

import numpy as np

from . import conjugate, lab, oracle, zero3
from .definiteness import classify, condition_report, is_nondefinite
from .errors import ConditionFailure, HollowkitError, InvalidMatrix, NumericalBreakdown
from .matrix import DEFAULT_TOL, ToleranceConfig, matrix_from_json_obj, matrix_to_json_obj

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, floats as 17 significant digits, non-finite as null."""
    return _enc(obj)


def _enc(o) -> str:
    if o is None or o is True or o is False:
        return json.dumps(o)
    if isinstance(o, (bool, np.bool_)):
        return "true" if o else "false"
    if isinstance(o, (int, np.integer)):
        return str(int(o))
    if isinstance(o, (float, np.floating)):
        x = float(o)
        if not math.isfinite(x):
            return "null"
        s = format(x, ".17g")
        if "e" not in s and "." not in s and "n" not in s:
            s += ".0"
        return s
    if isinstance(o, str):
        return json.dumps(o)
    if isinstance(o, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_enc(v)}" for k, v in sorted(o.items(), key=lambda kv: str(kv[0]))) + "}"
    if isinstance(o, (list, tuple)):
        return "[" + ", ".join(_enc(v) for v in o) + "]"
    if isinstance(o, np.ndarray):
        return _enc(o.tolist())
    raise TypeError(f"cannot encode {type(o).__name__}")


def _load_json(text: str):
    """Inline JSON, a file path, or '-' for standard input."""
    if text == "-":
        text = sys.stdin.read()
    elif not text.lstrip().startswith(("{", "[")):
        try:
            with open(text) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {text!r}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None


def _matrix(text: str) -> np.ndarray:
    obj = _load_json(text)
    if isinstance(obj, list):
        obj = {"n": len(obj), "rows": obj}
    return matrix_from_json_obj(obj)


def _pattern(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise InputError(f"pattern must be comma-separated integers, got {text!r}") from None


def _default_seed() -> int:
    raw = os.environ.get("HOLLOWKIT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"HOLLOWKIT_SEED must be an integer, got {raw!r}") from None


def _matrices(args, count: int) -> List[np.ndarray]:
    given = args.matrix or []
    if len(given) != count:
        raise InputError(f"{args.command} needs exactly {count} --matrix argument(s), got {len(given)}")
    return [_matrix(m) for m in given]


def _tol(args) -> ToleranceConfig:
    if args.tol is None:
        return DEFAULT_TOL
    try:
        return ToleranceConfig(zero_tol=args.tol)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# --------------------------------------------------------------------------
# subcommands


def cmd_classify(args):
    mats = [_matrix(m) for m in (args.matrix or [])]
    if len(mats) not in (1, 2):
        raise InputError("classify takes one matrix, or an L, M pair of size 3")
    tol = _tol(args)
    out = {"ladder": classify(mats[0], tol).name, "nondefinite": is_nondefinite(mats[0], tol)}
    if len(mats) == 2:
        if mats[0].shape != (3, 3) or mats[1].shape != (3, 3):
            raise InputError("a pair for classify must be 3x3")
        out["conditions"] = condition_report(mats[0], mats[1], tol).to_dict()
    return out, EXIT_OK


def cmd_zero11(args):
    (M,) = _matrices(args, 1)
    if M.shape[0] != 3:
        raise InputError("zero11 needs a 3x3 matrix")
    c = zero3.zero_entry_1_1(M, _tol(args))
    out = c.to_dict()
    T = c.transform
    out["residual"] = float(abs((T.T @ M @ T)[0, 0]))
    return out, EXIT_OK


def cmd_conj_zero(args):
    L, M = _matrices(args, 2)
    return conjugate.conj_zero(L, M, _tol(args), args.seed).to_dict(), EXIT_OK


def cmd_conj_zero_prime(args):
    L, M = _matrices(args, 2)
    return conjugate.conj_zero_prime(L, M, _tol(args), args.seed).to_dict(), EXIT_OK


def cmd_hollowize(args):
    (M,) = _matrices(args, 1)
    return conjugate.hollowize(M, _tol(args), args.seed).to_dict(), EXIT_OK


def cmd_constant_diag(args):
    (M,) = _matrices(args, 1)
    cert, _ = conjugate.constant_diagonal(M, _tol(args), args.seed)
    return cert.to_dict(), EXIT_OK


def cmd_verify(args):
    if args.certificate is None:
        raise InputError("verify needs a certificate (inline JSON, a path, or -)")
    cert = conjugate.ZeroingCertificate.from_dict(_load_json(args.certificate))
    ok, report = oracle.verify_certificate(cert, _tol(args))
    return {"ok": ok, "checks": report}, EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args):
    L, M = _matrices(args, 2)
    n = L.shape[0]
    pats = args.pattern or []
    if len(pats) > 2:
        raise InputError("at most two --pattern arguments (L then M)")
    pl = _pattern(pats[0]) if len(pats) > 0 else list(range(1, n + 1))
    pm = _pattern(pats[1]) if len(pats) > 1 else list(range(1, n + 1))
    try:
        res = oracle.brute_force_conj(L, M, pl, pm, budget=args.budget, seed=args.seed)
    except IndexError as exc:
        raise InputError(str(exc)) from None
    return res.to_dict(), EXIT_OK


def cmd_conjecture(args):
    if args.size < 2:
        raise InputError("--size must be at least 2")
    if args.trials < 0:
        raise InputError("--trials must be nonnegative")
    restarts = 32 if args.budget is None else max(1, args.budget)
    cfg = lab.OptimizerConfig(restarts=restarts, seed=args.seed)
    return lab.test_conjecture(args.size, args.trials, cfg), EXIT_OK


COMMANDS = {
    "classify": (cmd_classify, "strongest ladder level; with an L, M pair of size 3 also the zeroing conditions"),
    "zero11": (cmd_zero11, "rotation zeroing entry (1,1) of a nondefinite 3x3 matrix"),
    "conj-zero": (cmd_conj_zero, "Psi with Psi^T L Psi zero at 3..n and Psi M Psi^T zero at 1..n-2"),
    "conj-zero-prime": (cmd_conj_zero_prime, "Psi with Psi^T L Psi zero at 2..n and Psi M Psi^T zero at 1..n-2"),
    "hollowize": (cmd_hollowize, "orthogonal hollowizer of a traceless matrix"),
    "constant-diag": (cmd_constant_diag, "orthogonal similarity to a constant diagonal"),
    "verify": (cmd_verify, "recheck a certificate"),
    "oracle": (cmd_oracle, "brute-force residual search"),
    "conjecture": (cmd_conjecture, "hollowization experiment on random traceless Hermitian pairs"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-m", "--matrix", action="append",
                        help='matrix as inline JSON {"n":..,"rows":..}, a file path, or -; repeat for L then M')
    common.add_argument("--tol", type=float, help="zero tolerance relative to the Frobenius norm")
    common.add_argument("--seed", type=int, default=None, help="RNG seed (default: $HOLLOWKIT_SEED or 0)")
    common.add_argument("--pattern", action="append", help="1-based indices, e.g. 1,2,3; repeat for L then M")
    common.add_argument("--budget", type=int, help="search budget (evaluations, or restarts for conjecture)")
    common.add_argument("--out", help="write the JSON result here instead of standard output")
    p = argparse.ArgumentParser(prog="hollowkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, parents=[common], help=help_)
        if name == "verify":
            sp.add_argument("certificate", nargs="?", help="certificate JSON, a path, or -")
        if name == "conjecture":
            sp.add_argument("-n", "--size", type=int, default=3)
            sp.add_argument("--trials", type=int, default=100)
    return p


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.seed is None:
            args.seed = _default_seed()
        result, code = COMMANDS[args.command][0](args)
    except (InputError, InvalidMatrix) as exc:
        err = exc.to_dict() if isinstance(exc, HollowkitError) else {"error": "InputError", "message": str(exc)}
        _emit(dumps(err), None)
        return EXIT_INPUT
    except (ConditionFailure, NumericalBreakdown) as exc:
        _emit(dumps(exc.to_dict()), None)
        return EXIT_FAIL
    _emit(dumps(result), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
