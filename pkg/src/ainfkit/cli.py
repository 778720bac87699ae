"""ainfkit command line."""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from .bar import bar_differential, check_bar_square, perturb
from .core import AInfPair, StructureError, check_ainf
from .deformation import deformed_differential, family_matrix, specialize_first_order
from .dual import TruncatedDualAlgebra, dual_to_json
from .fixtures import kill_target_fixture, product_free_pair, random_dg, random_homotopy
from .foundation import FieldSpec
from .io import ParseError, dumps, jet_to_json, read_json, structure_from_json, structure_to_json, write_json
from .jets import JetIdeal, coordinate_matrix, ideal_jet_equal, linear_independence, minors, straighten
from .kill import KillTarget, PetriFails, SignAmbiguity, kill_all, killlog
from .transfer import certify, local_algebra_fixture, transfer

OK, PROPERTY, INPUT, INTERNAL = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    field: FieldSpec | None = None
    N: int | None = None
    K: int = 4
    input: str | None = None
    out: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.N is not None and self.N < 2:
            raise InputError("--arity must be at least 2")
        if self.K < 1:
            raise InputError("--jet must be at least 1")


def _load(cfg: RunConfig):
    if not cfg.input:
        raise InputError("an input file is required")
    S = structure_from_json(read_json(cfg.input))
    if cfg.field is not None and cfg.field != S.field:
        raise InputError(f"input is over {S.field}, not {cfg.field}")
    return S


def _load_pair(cfg):
    S = _load(cfg)
    if not isinstance(S, AInfPair):
        try:
            S = AInfPair.from_structure(S)
        except StructureError as e:
            raise InputError(str(e)) from None
    return S


def _emit(cfg, doc):
    if cfg.out:
        write_json(cfg.out, doc)
    else:
        sys.stdout.write(dumps(doc))


def _counts(residuals):
    out = {}
    for r in residuals:
        out[r.arity] = out.get(r.arity, 0) + 1
    return out


# ------------------------------------------------------------------ commands


def cmd_check(cfg: RunConfig) -> int:
    S = _load(cfg)
    N = min(cfg.N or S.max_arity, S.max_arity)
    ainf = _counts(check_ainf(S, N))
    bar = {n: len(v) for n, v in check_bar_square(bar_differential(S, N)).items() if v}
    doc = {"report": "check", "max_arity": N,
           "ainf": {str(k): v for k, v in sorted(ainf.items())},
           "bar_square": {str(k): v for k, v in sorted(bar.items())},
           "clean": not ainf and not bar}
    _emit(cfg, doc)
    return OK if doc["clean"] else PROPERTY


def cmd_bar(cfg: RunConfig) -> int:
    S = _load(cfg)
    N = min(cfg.N or S.max_arity, S.max_arity)
    b = bar_differential(S, N)
    sq = check_bar_square(b)
    comps = {}
    for w in b.table:
        comps[len(w)] = comps.get(len(w), 0) + 1
    doc = {"report": "bar", "word_bound": N,
           "components": {str(k): v for k, v in sorted(comps.items())},
           "square_residuals": {str(k): len(v) for k, v in sorted(sq.items())},
           "square_zero": not any(sq.values())}
    _emit(cfg, doc)
    return OK if doc["square_zero"] else PROPERTY


def cmd_dual(cfg: RunConfig, obj=None) -> int:
    S = _load(cfg)
    _emit(cfg, dual_to_json(TruncatedDualAlgebra(S, cfg.K, obj)))
    return OK


def cmd_transfer(cfg: RunConfig) -> int:
    D = _load(cfg)
    model = transfer(D, N=cfg.N or D.max_arity)
    cert = certify(model)
    clean = all(not v["ainf"] and not v["functor"] for v in cert.values())
    doc = {"report": "transfer", "residuals": {str(n): v for n, v in cert.items()}, "clean": clean,
           "model": structure_to_json(model.structure)}
    _emit(cfg, doc)
    return OK if clean else PROPERTY


def cmd_deform(cfg: RunConfig) -> int:
    P = _load_pair(cfg)
    D = deformed_differential(P, K=cfg.K)
    doc = D.to_json()
    doc["square_zero"] = not D.square()
    doc["augmentation_is_m1"] = D.specialize_augmentation() == D.m1()
    _emit(cfg, doc)
    return OK if doc["square_zero"] and doc["augmentation_is_m1"] else PROPERTY


def _parse_xi(items, field):
    xi = {}
    for it in items or []:
        if "=" not in it:
            raise InputError(f"--xi expects label=scalar, got {it!r}")
        lab, c = it.split("=", 1)
        try:
            xi[lab] = field.parse_scalar(c)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"bad scalar in --xi {it!r}") from None
    return xi


def cmd_specialize(cfg: RunConfig, xi_items=()) -> int:
    P = _load_pair(cfg)
    D = deformed_differential(P, K=max(cfg.K, 1))
    xi = _parse_xi(xi_items, P.field)
    unknown = [k for k in xi if k not in D.R.labels]
    if unknown:
        raise InputError(f"not degree-1 algebra generators: {', '.join(unknown)}")
    fmt, lab = P.field.format_scalar, (lambda i: P.gens[i].label)
    res = specialize_first_order(D, xi)
    doc = {"report": "specialize", "xi": {k: fmt(v) for k, v in xi.items()},
           "d": {lab(x): {"const": {lab(y): fmt(c) for y, c in sorted(a.items())},
                          "eps": {lab(y): fmt(c) for y, c in sorted(b.items())}}
                 for x, (a, b) in res.items()}}
    _emit(cfg, doc)
    return OK


def cmd_kill(cfg: RunConfig) -> int:
    P = _load_pair(cfg)
    t = kill_all(KillTarget.from_pair(P), cfg.N or P.max_arity)
    doc = killlog(t)
    doc["structure"] = structure_to_json(t.pair)
    _emit(cfg, doc)
    return OK


def bn_pipeline(P: AInfPair, N: int, K: int, ranks=(0, 1)) -> dict:
    """kill -> family matrix -> straighten -> compare minor ideals."""
    t = kill_all(KillTarget.from_pair(P), N)
    Mt, _ = family_matrix(t.pair, K)
    field = P.field
    indep = linear_independence(Mt, field)
    doc = {"report": "bn-pipeline", "N": N, "K": K, "killlog": killlog(t),
           "family_matrix": jet_to_json(Mt, field), "linear_independence": indep, "ranks": {}}
    if not indep:
        doc["pass"] = False
        return doc
    phi, straight, piv = straighten(Mt, field)
    coord = coordinate_matrix(Mt.shape, piv, Mt.nvars, Mt.K)
    doc["straightening"] = jet_to_json(phi, field)
    doc["straightened_is_coordinate"] = straight == coord
    h = Mt.shape[1]
    for r in ranks:
        s = h - r
        I = JetIdeal(Mt.nvars, Mt.K, [phi(g) for g in minors(Mt, s).generators])
        eq = ideal_jet_equal(I, minors(coord, s), K)
        doc["ranks"][str(r)] = {"minor_size": s, "ideal_jet_equal": eq}
    doc["pass"] = doc["straightened_is_coordinate"] and all(v["ideal_jet_equal"] for v in doc["ranks"].values())
    return doc


def cmd_bn_pipeline(cfg: RunConfig, ranks=(0, 1)) -> int:
    P = _load_pair(cfg)
    doc = bn_pipeline(P, cfg.N or P.max_arity, cfg.K, ranks)
    _emit(cfg, doc)
    return OK if doc["pass"] else PROPERTY


FIXTURES = ("localalg", "randomdg", "perturb", "killtarget", "productfree")


def make_fixture(kind, cfg: RunConfig, n=3, width=3):
    field = cfg.field or FieldSpec(0)
    rng = random.Random(cfg.seed)
    if kind == "localalg":
        return local_algebra_fixture(n, cfg.N or 6, field, width)
    if kind == "randomdg":
        return random_dg(rng, field=field, max_arity=cfg.N or 5)
    if kind == "perturb":
        D = random_dg(rng, field=field, max_arity=cfg.N or 5)
        return perturb(D, random_homotopy(D, rng))
    if kind == "killtarget":
        return kill_target_fixture(cfg.seed, N=cfg.N or 5, field=field)
    if kind == "productfree":
        return product_free_pair(rng, field=field, max_arity=cfg.N or 5)
    raise InputError(f"unknown fixture kind {kind!r}; choose from {', '.join(FIXTURES)}")


def cmd_fixture(cfg: RunConfig, kind, n=3, width=3) -> int:
    _emit(cfg, structure_to_json(make_fixture(kind, cfg, n, width)))
    return OK


# ------------------------------------------------------------------ entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q or Fp:<p>")
    common.add_argument("--arity", type=int, help="arity bound N")
    common.add_argument("--jet", type=int, default=4, help="jet / word bound K")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output path (default: stdout)")

    p = argparse.ArgumentParser(prog="ainfkit",
                                description="Finite A-infinity categories, dual algebras and the killing algorithm.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("check", "bar", "transfer", "deform", "kill"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("input")
    sp = sub.add_parser("dual", parents=[common])
    sp.add_argument("input")
    sp.add_argument("--object", help="object carrying the algebra")
    sp = sub.add_parser("specialize", parents=[common])
    sp.add_argument("input")
    sp.add_argument("--xi", action="append", help="label=scalar, repeatable")
    sp = sub.add_parser("bn-pipeline", parents=[common])
    sp.add_argument("input")
    sp.add_argument("--rank", type=int, action="append", help="r (default: 0 and 1)")
    sp = sub.add_parser("fixture", parents=[common])
    sp.add_argument("kind", help=", ".join(FIXTURES))
    sp.add_argument("--n", type=int, default=3, help="local algebra k[x]/(x^n)")
    sp.add_argument("--width", type=int, default=3, help="cobar word-length truncation")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        field = FieldSpec.parse(args.field) if args.field else None
        cfg = RunConfig(field, args.arity, args.jet, getattr(args, "input", None), args.out, args.seed)
        c = args.command
        if c == "check":
            return cmd_check(cfg)
        if c == "bar":
            return cmd_bar(cfg)
        if c == "dual":
            return cmd_dual(cfg, args.object)
        if c == "transfer":
            return cmd_transfer(cfg)
        if c == "deform":
            return cmd_deform(cfg)
        if c == "specialize":
            return cmd_specialize(cfg, args.xi)
        if c == "kill":
            return cmd_kill(cfg)
        if c == "bn-pipeline":
            return cmd_bn_pipeline(cfg, tuple(args.rank) if args.rank else (0, 1))
        if c == "fixture":
            return cmd_fixture(cfg, args.kind, args.n, args.width)
    except PetriFails as e:
        print(f"error: {e}", file=sys.stderr)
        return PROPERTY
    except SignAmbiguity as e:
        print(f"internal: {e}", file=sys.stderr)
        return INTERNAL
    except (ParseError, InputError, StructureError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT
    except Exception as e:  # noqa: BLE001
        print(f"internal: {type(e).__name__}: {e}", file=sys.stderr)
        return INTERNAL
    return INPUT


if __name__ == "__main__":
    sys.exit(main())
