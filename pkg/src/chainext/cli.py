"""Command-line entry point: deterministic reports over the bundled or
user-supplied model files.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 input or
parse error.  Identical configuration yields byte-identical output; the
structured format is JSON with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import os
import random
from typing import NamedTuple

from . import brst as brst_mod
from . import bv as bv_mod
from . import formats
from .complexes import (chain_extend, check_l2_conditions,
                        homology_dim_of_differential, total_homology_dims,
                        verify_homotopy, verify_nilpotent)
from .instances import random_split_instance
from .lie import (Cochain, DeformationPreconditionError, alpha0_cochain,
                  bracket2, extend_deformation, h2, jacobi_check)
from .shlie import (build_shlie, crosscheck_with_engine, l3_is_obstruction,
                    variants_agree, verify_shlie)

MODELS_DIR = os.path.join(os.path.dirname(__file__), "models")

PASS, MATH_FAIL, INPUT_ERROR = 0, 1, 2


class RunConfig(NamedTuple):
    command: str
    input: str | None = None
    trunc: int = 4
    cap: int = 6
    order: int = 3
    alpha1: str | None = None
    cross_check: bool = False
    seed: int = 1
    fmt: str = "text"


def resolve_input(name):
    """A literal path, or the name of a bundled model file."""
    if name is None:
        raise formats.FormatError(0, "no input file given")
    if os.path.isfile(name):
        return name
    for candidate in (os.path.join(MODELS_DIR, name),
                      os.path.join(MODELS_DIR, name + ".txt")):
        if os.path.isfile(candidate):
            return candidate
    raise formats.FormatError(0, "no such input: %s" % name)


def read_input(name):
    with open(resolve_input(name)) as fh:
        return fh.read()


def _load(name, want_kind, loader):
    text = read_input(name)
    kind = formats.read_kind(text)
    if kind != want_kind:
        raise formats.FormatError(1, "expected a %r file, got %r"
                                  % (want_kind, kind))
    return loader(text)


def format_cochain(ch: Cochain) -> str:
    bits = []
    for idx in sorted(ch.entries):
        for k, c in enumerate(ch.entries[idx]):
            if c:
                bits.append("a %s %d: %s"
                            % (" ".join(str(i + 1) for i in idx), k + 1, c))
    return "; ".join(bits) if bits else "0"


# -- commands ---------------------------------------------------------------------


def cmd_lie(config: RunConfig):
    alg = _load(config.input, "lie", formats.load_lie)
    report = {"command": "lie", "dim": alg.dim}
    if not jacobi_check(alg):
        report["jacobi"] = "failed"
        return report, MATH_FAIL
    report["jacobi"] = "ok"
    dim_h2, reps = h2(alg)
    report["H2 dim"] = dim_h2
    for i, rep in enumerate(reps, start=1):
        report["H2 rep %d" % i] = format_cochain(rep)
    if config.alpha1 is not None:
        a1 = _load(config.alpha1, "cochain", formats.load_cochain)
        if a1.dim != alg.dim or a1.arity != 2:
            raise formats.FormatError(0, "alpha1 must be a 2-cochain on the "
                                         "same space")
        obstruction = bracket2(a1, a1)
        report["obstruction [a1,a1]"] = \
            "zero" if obstruction.is_zero() else "nonzero"
        alphas = [a1]
        try:
            for order in range(2, config.order + 1):
                nxt = extend_deformation(alg, alphas)
                if nxt is None:
                    report["order %d" % order] = "obstructed"
                    break
                report["order %d" % order] = "extended"
                alphas.append(nxt)
        except DeformationPreconditionError as e:
            report["order %d" % (len(alphas) + 1)] = "error: %s" % e
            return report, MATH_FAIL
    return report, PASS


def cmd_shlie(config: RunConfig):
    alg = _load(config.input, "lie", formats.load_lie)
    if config.alpha1 is not None:
        a1 = _load(config.alpha1, "cochain", formats.load_cochain)
    else:
        a1 = Cochain.zero(alg.dim, 2)
    report = {"command": "shlie", "trunc": config.trunc}
    a0 = alpha0_cochain(alg)
    code = PASS
    try:
        built = {v: build_shlie(alg, a0, a1, N=config.trunc, variant=v)
                 for v in ("t2", "full")}
    except ValueError as e:
        report["build"] = "error: %s" % e
        return report, MATH_FAIL
    for v, S in sorted(built.items()):
        rep = verify_shlie(S)
        report["variant %s relations" % v] = "ok" if rep["ok"] else \
            "failed at %s" % (rep["first_failure"],)
        report["variant %s l3 is obstruction" % v] = l3_is_obstruction(S)
        if not rep["ok"] or not l3_is_obstruction(S):
            code = MATH_FAIL
        if config.cross_check:
            cc = crosscheck_with_engine(S)
            report["variant %s engine cross-check" % v] = cc["ok"]
            if not cc["ok"]:
                code = MATH_FAIL
    agree = variants_agree(built["full"], built["t2"])
    report["variants agree"] = agree
    if not agree:
        code = MATH_FAIL
    return report, code


def cmd_brst(config: RunConfig):
    m, n, table, structure = _load(config.input, "brst", formats.load_brst)
    report = {"command": "brst", "m": m, "n": n, "cap": config.cap}
    try:
        system = brst_mod.ConstraintSystem(m, n, table, structure)
    except ValueError as e:
        report["first-class closure"] = "error: %s" % e
        return report, MATH_FAIL
    code = PASS
    rep = brst_mod.verify_brst_resolution(system, cap=config.cap)
    report["resolution identities"] = "ok" if rep["ok"] else \
        "failed at %s" % (rep["first_failure"],)
    if not rep["ok"]:
        code = MATH_FAIL
    ext = brst_mod.build_brst(system, degree_cap=config.cap)
    for a in range(1, n + 1):
        report["l2(P%d)" % a] = repr(ext.l2(system.gen("P%d" % a)))
    l3_vals = {a: ext.l3(system.gen("G%d" % a)) for a in range(1, n + 1)}
    report["l3 vanishes"] = all(v.is_zero() for v in l3_vals.values())
    for a, v in sorted(l3_vals.items()):
        if not v.is_zero():
            report["l3(G%d)" % a] = repr(v)
    offender = brst_mod.check_nilpotent_on_basis(ext, config.cap)
    report["(delta+l2+l3)^2 on basis"] = \
        "ok" if offender is None else "failed at %s" % (offender,)
    if offender is not None:
        code = MATH_FAIL
    return report, code


def cmd_bv(config: RunConfig):
    model, S_terms, file_trunc = _load(config.input, "bv", formats.load_bv)
    trunc = file_trunc if file_trunc is not None else config.trunc
    report = {"command": "bv", "order": len(S_terms) - 1, "trunc": trunc}
    code = PASS
    try:
        S = []
        for i, term in enumerate(S_terms):
            if term == "auto":
                cocycles = bv_mod.find_s0_cocycle(model, S[0], 2)
                term = next((f for f in cocycles
                             if any(len(mm) >= 2 for mm in f.terms)), None)
                if term is None:
                    raise ValueError("no nontrivial cocycle found for S%d" % i)
                report["S%d (searched)" % i] = formats.format_poly(term)
            S.append(term)
        problem = bv_mod.DeformationProblem(model, S, trunc=trunc)
        maps = bv_mod.theorem8_maps(problem)
    except ValueError as e:
        report["setup"] = "error: %s" % e
        return report, MATH_FAIL
    R = bv_mod.obstruction_R(problem, problem.n + 1)
    report["obstruction R"] = formats.format_poly(R)
    rep = bv_mod.verify_theorem8(maps, maxdeg=min(config.cap, model.cap))
    report["extension checks"] = "ok" if rep["ok"] else \
        "failed at %s" % (rep["first_failure"],)
    if not rep["ok"]:
        code = MATH_FAIL
    if config.cross_check:
        match = bv_mod.engine_matrices_match(maps, min(config.cap, 3))
        report["engine cross-check"] = match
        if not match:
            code = MATH_FAIL
    return report, code


def cmd_extend(config: RunConfig):
    hd, l2_0, d_f = _load(config.input, "extend", formats.load_extend)
    report = {"command": "extend", "dims": list(hd.space.dims),
              "f_dim": hd.f_dim}
    code = PASS
    hrep = verify_homotopy(hd)
    if hrep["ok"]:
        report["homotopy identities"] = "ok"
    else:
        bad = next(k for k, v in hrep.items() if k != "ok" and not v)
        report["homotopy identities"] = "failed at %s" % bad
        return report, MATH_FAIL
    cond = check_l2_conditions(hd, l2_0, d_f)
    report["conditions"] = "ok" if cond["ok"] else "failed"
    if not cond["ok"]:
        return report, MATH_FAIL
    ext = chain_extend(hd, l2_0, d_f=d_f)
    nrep = verify_nilpotent(ext)
    report["nilpotent"] = "ok" if nrep["ok"] else "failed"
    if not nrep["ok"]:
        code = MATH_FAIL
    total_h = total_homology_dims(ext)
    report["homology dim (total)"] = total_h
    if d_f is not None:
        base_h = homology_dim_of_differential(d_f)
        report["homology dim (base)"] = base_h
        report["homology match"] = total_h == base_h
        if total_h != base_h:
            code = MATH_FAIL
    return report, code


def cmd_fuzz(config: RunConfig):
    rng = random.Random(config.seed)
    count = 100
    passed = 0
    for _ in range(count):
        hd, l2_0, d_f = random_split_instance(rng)
        ext = chain_extend(hd, l2_0, d_f=d_f)
        if verify_nilpotent(ext)["ok"]:
            passed += 1
    report = {"command": "fuzz", "seed": config.seed, "instances": count,
              "passed": "%d/%d" % (passed, count)}
    return report, PASS if passed == count else MATH_FAIL


COMMANDS = {"lie": cmd_lie, "shlie": cmd_shlie, "brst": cmd_brst,
            "bv": cmd_bv, "extend": cmd_extend, "fuzz": cmd_fuzz}


def render(report, fmt) -> str:
    if fmt == "structured":
        return json.dumps(report, sort_keys=True, indent=2, default=str)
    return "\n".join("%s: %s" % (k, v) for k, v in report.items())


def build_parser():
    parser = argparse.ArgumentParser(
        prog="chainext",
        description="exact chain-extension checks on small models")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in sorted(COMMANDS):
        p = sub.add_parser(name)
        p.add_argument("--input", default=None,
                       help="input file path or bundled model name")
        p.add_argument("--trunc", type=int, default=4)
        p.add_argument("--cap", type=int, default=6)
        p.add_argument("--order", type=int, default=3)
        p.add_argument("--alpha1", default=None)
        p.add_argument("--cross-check", action="store_true")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--format", dest="fmt", default="text",
                       choices=("text", "structured"))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(command=args.command, input=args.input,
                       trunc=args.trunc, cap=args.cap, order=args.order,
                       alpha1=args.alpha1, cross_check=args.cross_check,
                       seed=args.seed, fmt=args.fmt)
    try:
        report, code = COMMANDS[config.command](config)
    except formats.FormatError as e:
        print(render({"error": str(e)}, config.fmt))
        return INPUT_ERROR
    except OSError as e:
        print(render({"error": str(e)}, config.fmt))
        return INPUT_ERROR
    print(render(report, config.fmt))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
