"""Batch front end: presentation files in, reports out.

Exit codes: 0 when every asserted check passes, 1 when a check fails or
a retraction does not exist, 2 on usage, parse, or cap errors.  Text
output is for people; `--format structured` emits one JSON document with
sorted keys and no timing, so identical inputs give identical bytes.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from dataclasses import dataclass, field

from . import fintop
from .corpus import chain_space
from .dcomp import check_family_continuous, dcomp_crosscheck, dcomp_embed, dyad_family_of
from .errors import (
    NoRetraction,
    AmbiguousRetraction,
    ParseError,
    TopolabError,
    UnknownName,
    UsageError,
)
from .fintop import (
    FinSpace,
    enumerate_topologies,
    hasse_dot,
    iso_check,
    property_report,
    specialization,
)
from .reflect import beta2_fragment, retraction, t0_reflection, t2_reflection
from .setalg import OMEGA, DefSet, Ground, parse_set_expr
from .star import (
    DefMap,
    SpacePresentation,
    StarModel,
    build_star,
    density_violations,
    model_monad,
    robinson_coverage,
    sandwich_violations,
    star_identity_violations,
)

PASS, FAIL, WARN, INFO = "pass", "fail", "warn", "info"


# -- presentation files ------------------------------------------------


@dataclass(frozen=True)
class PresentationFile:
    """Parsed presentation: named sets, subbase and sample selections, maps."""

    ground: Ground
    sets: tuple[tuple[str, DefSet], ...]
    subbase: tuple[str, ...]
    samples: tuple[int, ...]
    maps: tuple[tuple[str, DefMap], ...] = ()

    def presentation(self) -> SpacePresentation:
        named = dict(self.sets)
        return SpacePresentation(
            self.ground, tuple(named[n] for n in self.subbase), self.samples)


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def _parse_map_body(body: str, ground: Ground, lineno: int) -> DefMap:
    table_part, semi, rule_part = body.partition(";")
    toks = table_part.split()
    if not toks or toks[0] != "table":
        raise ParseError("map body must start with 'table'", line=lineno)
    pairs = {}
    for tok in toks[1:]:
        m, colon, v = tok.partition(":")
        if not colon or not m.isdigit() or not v.isdigit():
            raise ParseError(f"bad table entry {tok!r}", line=lineno)
        if int(m) in pairs:
            raise ParseError(f"duplicate table entry for {m}", line=lineno)
        pairs[int(m)] = int(v)
    if ground.is_finite:
        if semi:
            raise ParseError("finite-ground maps take no periodic part", line=lineno)
        table = []
        for m in range(ground.size):
            if m not in pairs:
                raise ParseError(f"table misses point {m}", line=lineno)
            table.append(pairs[m])
        if len(pairs) != ground.size:
            raise ParseError("table lists points outside the ground", line=lineno)
        return DefMap(ground, tuple(table))
    if not semi:
        raise ParseError("maps on omega need '; periodic t p ...'", line=lineno)
    rtoks = rule_part.split()
    if len(rtoks) < 3 or rtoks[0] != "periodic":
        raise ParseError("expected 'periodic t p' after ';'", line=lineno)
    if not rtoks[1].isdigit() or not rtoks[2].isdigit():
        raise ParseError("periodic needs numeric t and p", line=lineno)
    t, p = int(rtoks[1]), int(rtoks[2])
    if p < 1:
        raise ParseError("period must be at least 1", line=lineno)
    table = []
    for m in range(t):
        if m not in pairs:
            raise ParseError(f"table misses point {m} below threshold {t}", line=lineno)
        table.append(pairs[m])
    if len(pairs) != t:
        raise ParseError(f"table lists points at or above threshold {t}", line=lineno)
    rules: list[tuple[str, int] | None] = [None] * p
    rest = rtoks[3:]
    if len(rest) != 3 * p:
        raise ParseError(f"expected {p} residue clauses 'r: const c | shift d'",
                         line=lineno)
    for i in range(p):
        rtok, kind, val = rest[3 * i: 3 * i + 3]
        if not rtok.endswith(":") or not rtok[:-1].isdigit():
            raise ParseError(f"bad residue tag {rtok!r}", line=lineno)
        r = int(rtok[:-1])
        if not 0 <= r < p or rules[r] is not None:
            raise ParseError(f"residue {r} out of range or repeated", line=lineno)
        if kind not in ("const", "shift"):
            raise ParseError(f"unknown rule kind {kind!r}", line=lineno)
        try:
            arg = int(val)
        except ValueError:
            raise ParseError(f"bad rule argument {val!r}", line=lineno) from None
        rules[r] = (kind, arg)
    try:
        return DefMap(ground, tuple(table), tuple(rules))  # type: ignore[arg-type]
    except (ValueError, TopolabError) as exc:
        raise ParseError(str(exc), line=lineno) from exc


def parse_presentation(text: str) -> PresentationFile:
    """Line-oriented grammar: `ground omega|finite N`, `set NAME = EXPR`,
    `subbase NAME...`, `samples N...`, `map NAME = ...`; `#` comments."""
    ground: Ground | None = None
    sets: list[tuple[str, DefSet]] = []
    names: dict[str, DefSet] = {}
    subbase: tuple[str, ...] | None = None
    samples: tuple[int, ...] | None = None
    maps: list[tuple[str, DefMap]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "ground":
            if ground is not None:
                raise ParseError("duplicate ground declaration", line=lineno)
            if rest == "omega":
                ground = OMEGA
            else:
                kind, _, num = rest.partition(" ")
                if kind != "finite" or not num.strip().isdigit():
                    raise ParseError(f"bad ground {rest!r}", line=lineno)
                ground = Ground(int(num))
        elif head == "set":
            if ground is None:
                raise ParseError("ground must be declared before sets", line=lineno)
            name, eq, expr = rest.partition("=")
            name = name.strip()
            if not eq or not _NAME.match(name):
                raise ParseError("expected 'set NAME = EXPR'", line=lineno)
            if name in names:
                raise ParseError(f"duplicate set name {name!r}", line=lineno)
            offset = raw.index("=") + 1
            try:
                value = parse_set_expr(expr, ground, names)
            except ParseError as exc:
                col = (exc.col or 1) + offset
                raise ParseError(exc.base_message, line=lineno, col=col) from None
            except UnknownName as exc:
                raise UnknownName(f"line {lineno}: {exc}") from None
            sets.append((name, value))
            names[name] = value
        elif head == "subbase":
            if subbase is not None:
                raise ParseError("duplicate subbase line", line=lineno)
            chosen = tuple(rest.split())
            for n in chosen:
                if n not in names:
                    raise UnknownName(f"line {lineno}: unknown set name {n!r}")
            subbase = chosen
        elif head == "samples":
            if samples is not None:
                raise ParseError("duplicate samples line", line=lineno)
            vals = rest.split()
            if not all(v.isdigit() for v in vals):
                raise ParseError("samples must be natural numbers", line=lineno)
            samples = tuple(int(v) for v in vals)
        elif head == "map":
            if ground is None:
                raise ParseError("ground must be declared before maps", line=lineno)
            name, eq, body = rest.partition("=")
            name = name.strip()
            if not eq or not _NAME.match(name):
                raise ParseError("expected 'map NAME = ...'", line=lineno)
            if any(n == name for n, _ in maps):
                raise ParseError(f"duplicate map name {name!r}", line=lineno)
            maps.append((name, _parse_map_body(body.strip(), ground, lineno)))
        else:
            raise ParseError(f"unknown directive {head!r}", line=lineno)
    if ground is None:
        raise ParseError("missing ground declaration")
    if subbase is None:
        raise ParseError("missing subbase line (use a bare 'subbase' for none)")
    if samples is None:
        raise ParseError("missing samples line (use a bare 'samples' for none)")
    return PresentationFile(ground, tuple(sets), subbase, samples, tuple(maps))


def serialize_presentation(pf: PresentationFile) -> str:
    lines = []
    if pf.ground.is_finite:
        lines.append(f"ground finite {pf.ground.size}")
    else:
        lines.append("ground omega")
    for name, value in pf.sets:
        lines.append(f"set {name} = {value.describe()}")
    lines.append(("subbase " + " ".join(pf.subbase)).rstrip())
    lines.append(("samples " + " ".join(str(s) for s in pf.samples)).rstrip())
    for name, f in pf.maps:
        entries = " ".join(f"{m}:{f.table[m]}" for m in range(len(f.table)))
        body = ("table " + entries).rstrip()
        if not pf.ground.is_finite:
            clauses = " ".join(f"{r}: {kind} {arg}" for r, (kind, arg) in enumerate(f.rules))
            body += f" ; periodic {len(f.table)} {len(f.rules)} {clauses}".rstrip()
        lines.append(f"map {name} = {body}")
    return "\n".join(lines) + "\n"


# -- reports -----------------------------------------------------------


@dataclass
class ReportItem:
    name: str
    status: str
    detail: str = ""
    witness: str = ""


@dataclass
class Report:
    command: str
    source: str
    items: list[ReportItem] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0

    def add(self, name: str, status: str, detail: str = "", witness: str = "") -> None:
        self.items.append(ReportItem(name, status, detail, witness))

    def check(self, name: str, ok: bool, detail: str = "", witness: str = "") -> None:
        self.add(name, PASS if ok else FAIL, detail, "" if ok else witness)

    @property
    def failed(self) -> bool:
        return any(item.status == FAIL for item in self.items)


def render_text(report: Report) -> str:
    lines = [f"topolab {report.command} {report.source}".rstrip()]
    for item in report.items:
        line = f"  {item.status:<4}  {item.name:<28} {item.detail}".rstrip()
        if item.witness:
            line += f"  [witness: {item.witness}]"
        lines.append(line)
    if report.summary:
        parts = " ".join(f"{k}={report.summary[k]}" for k in report.summary)
        lines.append(f"summary: {parts}")
    lines.append(f"time: {report.elapsed_ms:.1f}ms")
    return "\n".join(lines) + "\n"


def render_structured(report: Report) -> str:
    doc = {
        "command": report.command,
        "source": report.source,
        "items": [
            {"name": i.name, "status": i.status, "detail": i.detail, "witness": i.witness}
            for i in report.items
        ],
        "summary": report.summary,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


# -- command implementations -------------------------------------------


def _atom_cap() -> int | None:
    raw = os.environ.get("TOPOLAB_ATOM_CAP")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"TOPOLAB_ATOM_CAP={raw!r} is not a number") from None


def _load(path: str) -> SpacePresentation:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_presentation(fh.read()).presentation()


def _atom_label(m: StarModel, i: int) -> str:
    s = m.labels[i]
    return f"x{s}" if s is not None else m.atoms[i].describe()


def _mask_text(m: StarModel, mask: int) -> str:
    names = [_atom_label(m, i) for i in range(len(m.atoms)) if (mask >> i) & 1]
    return "{" + ",".join(names) + "}"


def _summarize(report: Report, m: StarModel) -> None:
    report.summary.update(
        atoms=len(m.atoms),
        opens=len(m.space.opens),
        standard=len(m.embedding),
        labels=[_atom_label(m, i) for i in range(len(m.atoms))],
    )


def _sample_space(m: StarModel) -> FinSpace:
    samples = m.presentation.samples
    opens = set()
    for o in m.space.opens:
        gset = m.union_of(o)
        opens.add(sum(1 << j for j, s in enumerate(samples) if s in gset))
    return FinSpace(len(samples), tuple(opens))


def _report_flags(report: Report, prefix: str, rep: fintop.PropertyReport) -> None:
    flags = rep.flags()
    text = " ".join(f"{name}={'y' if flags[name] else 'n'}" for name in flags)
    witnesses = "; ".join(f"{name}: {payload}" for name, payload in rep.witnesses)
    report.add(prefix, INFO, text, witnesses)


def _write_dot(m: StarModel, path: str) -> None:
    labels = [_atom_label(m, i) for i in range(len(m.atoms))]
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(hasse_dot(specialization(m.space), labels))


def cmd_check(path: str, report: Report) -> None:
    p = _load(path)
    m = build_star(p, _atom_cap())
    misses = p.sample_misses()
    if misses:
        report.add("sample-hitting", WARN,
                   f"subbase sets without samples: {misses}")
    else:
        report.add("sample-hitting", PASS, "every nonempty subbase set holds a sample")
    bad = star_identity_violations(m)
    scope = "algebra" if len(m.atoms) <= 6 else "fragment opens"
    report.check("star-identities", not bad, f"pairs over the {scope}",
                 "; ".join(bad[:3]))
    rep = property_report(m.space)
    for flag in ("compact", "locally_compact", "supercompact"):
        report.check(f"model-{flag}", getattr(rep, flag), witness=str(rep.witness(flag)))
    if misses:
        report.add("density", INFO, "skipped: sample-hitting fails")
    else:
        gaps = density_violations(m)
        report.check("density", not gaps, "every nonempty model open meets the samples",
                     f"open without standard atom: {gaps[:1]}")
    cov = robinson_coverage(m)
    detail = "covered" if cov.covered else (
        "uncovered atoms: " + ", ".join(_atom_label(m, i) for i in cov.uncovered))
    report.add("coverage", INFO, detail)
    if cov.covered:
        viol = sandwich_violations(m)
        report.check("monad-sandwich", not viol,
                     "star(G) within standard monads within star(V) for nested opens",
                     "; ".join(f"G={_mask_text(m, g)} V={_mask_text(m, v)}"
                               for g, v in viol[:2]))
    else:
        report.add("monad-sandwich", INFO, "skipped: coverage fails")
    _report_flags(report, "sample-space-report", property_report(_sample_space(m)))
    _report_flags(report, "model-report", rep)
    _summarize(report, m)


def cmd_star(path: str, report: Report) -> None:
    p = _load(path)
    m = build_star(p, _atom_cap())
    for i in range(len(m.atoms)):
        report.add(f"monad({_atom_label(m, i)})", INFO,
                   _mask_text(m, model_monad(m, i)))
    cov = robinson_coverage(m)
    if cov.covered:
        report.add("coverage", INFO, "covered")
    else:
        report.add("coverage", INFO, "uncovered atoms: " + ", ".join(
            _atom_label(m, i) for i in cov.uncovered))
    _summarize(report, m)


def cmd_reflect(path: str, kind: str, report: Report) -> None:
    p = _load(path)
    m = build_star(p, _atom_cap())
    q = t0_reflection(m.space) if kind == "t0" else t2_reflection(m.space)
    rep = property_report(q.target)
    if kind == "t0":
        report.check("target-t0", rep.t0, witness=str(rep.witness("t0")))
    else:
        report.check("target-discrete", len(q.target.opens) == 1 << q.target.n,
                     witness=f"opens={len(q.target.opens)}")
    again = t0_reflection(q.target) if kind == "t0" else t2_reflection(q.target)
    report.check("idempotent", again.is_identity)
    report.summary.update(atoms=m.space.n, classes=q.target.n,
                          assign=list(q.assign))


def cmd_beta(path: str, report: Report) -> None:
    p = _load(path)
    m = build_star(p, _atom_cap())
    q = t2_reflection(m.space)
    report.check("target-discrete", len(q.target.opens) == 1 << q.target.n)
    report.check("idempotent", t2_reflection(q.target).is_identity)
    std_classes = {q.assign[i] for i in m.embedding}
    report.add("samples-embedded", INFO,
               f"{len(std_classes)} classes over {len(m.embedding)} samples")
    report.summary.update(atoms=m.space.n, classes=q.target.n, assign=list(q.assign))


def cmd_beta2(path: str, report: Report) -> None:
    p = _load(path)
    m, q = beta2_fragment(p, _atom_cap())
    rep = property_report(q.target)
    for flag in ("t0", "compact", "locally_compact", "supercompact"):
        report.check(f"target-{flag}", getattr(rep, flag),
                     witness=str(rep.witness(flag)))
    report.check("idempotent", t0_reflection(q.target).is_identity)
    iso = iso_check(q.target, chain_space(q.target.n))
    report.add("target-iso-upper-chain", INFO, "yes" if iso else "no")
    report.summary.update(atoms=m.space.n, classes=q.target.n, assign=list(q.assign))


def cmd_retract(path: str, report: Report) -> None:
    p = _load(path)
    m = build_star(p, _atom_cap())
    try:
        r = retraction(m)
    except NoRetraction as exc:
        report.add("retraction-exists", FAIL,
                   witness=f"NoRetraction({_atom_label(m, exc.atom)}): {exc}")
        _summarize(report, m)
        return
    except AmbiguousRetraction as exc:
        report.add("retraction-exists", FAIL,
                   witness=f"AmbiguousRetraction({_atom_label(m, exc.atom)}): {exc}")
        _summarize(report, m)
        return
    report.add("retraction-exists", PASS)
    report.check("continuous", r.continuous)
    identity = all(p.samples[j] in r.assign[m.embedding[j]]
                   for j in range(len(p.samples)))
    report.check("fixes-standard-part", identity)
    for i in range(len(m.atoms)):
        report.add(f"r({_atom_label(m, i)})", INFO,
                   "{" + ",".join(str(s) for s in sorted(r.assign[i])) + "}")
    _summarize(report, m)


def cmd_dcomp(path: str, report: Report) -> None:
    p = _load(path)
    m = build_star(p, _atom_cap())
    fam = dyad_family_of(p)
    report.check("family-continuous", check_family_continuous(p, fam, m),
                 f"{len(fam.maps)} characteristic maps")
    emb = dcomp_embed(p, fam, m)
    report.add("image-vectors", INFO,
               " ".join(format(v, f"0{max(len(fam.maps), 1)}b") for v in emb.image_vectors))
    report.add("closure-size", INFO, str(len(emb.closure_vectors)))
    cc = dcomp_crosscheck(p, _atom_cap())
    report.add("beta2-embeds-in-image", INFO, "yes" if cc.embeds else "no")
    report.add("beta2-homeomorphic-to-image", INFO, "yes" if cc.homeomorphic else "no")
    report.summary.update(family=len(fam.maps), image=len(emb.image_vectors),
                          closure=len(emb.closure_vectors))


def cmd_enumerate(n: int, report: Report) -> None:
    counts = []
    all_ok_equiv = True
    all_ok_mono = True
    all_ok_t2 = True
    witness_equiv = witness_mono = witness_t2 = ""
    for k in range(n + 1):
        spaces = list(enumerate_topologies(k))
        counts.append(len(spaces))
        for s in spaces:
            rep = property_report(s)
            if not (rep.regular == rep.completely_regular == rep.all_opens_closed):
                all_ok_equiv = False
                witness_equiv = witness_equiv or repr(s.opens)
            if (rep.t2 and not rep.t1) or (rep.t1 and not rep.t0):
                all_ok_mono = False
                witness_mono = witness_mono or repr(s.opens)
            if rep.t2 != (len(s.opens) == 1 << s.n):
                all_ok_t2 = False
                witness_t2 = witness_t2 or repr(s.opens)
    report.check("regular-eq-completely-regular-eq-clopen", all_ok_equiv,
                 witness=witness_equiv)
    report.check("t2-implies-t1-implies-t0", all_ok_mono, witness=witness_mono)
    report.check("t2-iff-discrete", all_ok_t2, witness=witness_t2)
    report.summary.update(counts=counts, total=sum(counts))


def cmd_dot(path: str, out: str, report: Report) -> None:
    p = _load(path)
    m = build_star(p, _atom_cap())
    _write_dot(m, out)
    report.add("dot-written", INFO, out)
    _summarize(report, m)


# -- entry point --------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topolab",
        description="fragment models, reflections and compactifications "
                    "of presented spaces")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, with_file: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name)
        if with_file:
            sp.add_argument("file", help="presentation file")
        sp.add_argument("--format", choices=("text", "structured"), default="text")
        sp.add_argument("--dot", metavar="PATH", help="also write a DOT diagram")
        return sp

    for name in ("check", "star", "beta", "beta2", "retract", "dcomp"):
        add(name)
    reflect_p = add("reflect")
    reflect_p.add_argument("--kind", choices=("t0", "t2"), default="t0")
    enum_p = add("enumerate", with_file=False)
    enum_p.add_argument("--n", type=int, required=True, metavar="N")
    dot_p = add("dot")
    dot_p.add_argument("--out", required=True, metavar="PATH")
    return parser


def run(args: argparse.Namespace) -> Report:
    started = time.perf_counter()
    if args.command == "enumerate":
        report = Report(args.command, f"n={args.n}")
        cmd_enumerate(args.n, report)
    else:
        report = Report(args.command, args.file)
        handler = {
            "check": cmd_check,
            "star": cmd_star,
            "beta": cmd_beta,
            "beta2": cmd_beta2,
            "retract": cmd_retract,
            "dcomp": cmd_dcomp,
        }
        if args.command == "reflect":
            cmd_reflect(args.file, args.kind, report)
        elif args.command == "dot":
            cmd_dot(args.file, args.out, report)
        else:
            handler[args.command](args.file, report)
        if getattr(args, "dot", None) and args.command not in ("dot", "enumerate"):
            _write_dot(build_star(_load(args.file), _atom_cap()), args.dot)
            report.add("dot-written", INFO, args.dot)
    report.elapsed_ms = (time.perf_counter() - started) * 1000.0
    return report


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        report = run(args)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except TopolabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = render_structured(report) if args.format == "structured" else render_text(report)
    sys.stdout.write(out)
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
