"""Command-line front end: parse a graph file, run deciders, print reports.

Four subcommands::

    gogz check FILE            all verdicts with witnesses, text or JSON
    gogz paths FILE --kind ... enumerate complete closed chains / full paths
    gogz conj FILE --from 0:a --to 1:b   power conjugacy with a certificate
    gogz oracle FILE --relation "t_0 a^2 t_0^-1 = a^3"   evaluate exactly

Exit codes separate mathematics from plumbing: verdicts (including "not
balanced" and "no, the relation is false") exit 0; malformed input exits 2;
a witness that fails its independent verification exits 3 (that is a bug in
this package, never a property of the input).

JSON output is deterministic: the same file produces byte-identical reports
once ``--no-timing`` drops the one nondeterministic field.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from typing import List, Optional, Sequence, Tuple

from . import __version__
from .engine import Engine, brute_force_power_conjugacy
from .errors import (
    GogzError,
    InternalInconsistencyError,
    ParseError,
)
from .graphs import MINUS, GraphOfGroups, parse_graph
from .paths import (
    CompletePathVerdict,
    ConjugacyPath,
    NonMaximalPath,
    enumerate_complete_paths,
    enumerate_full_nonmaximal_paths,
    iter_conjugacy_paths,
)
from .verdicts import AnalysisReport, ConjugacyAnswer, analyze, power_conjugate
from .words import FreeWord

SCHEMA_VERSION = 1


# ---------------------------------------------------------------- formatting


def _format_word(graph: GraphOfGroups, word: FreeWord) -> str:
    return graph.vertices[int(word.vertex)].alphabet.format(word)


def _format_item(graph: GraphOfGroups, item) -> str:
    if isinstance(item, FreeWord):
        return _format_word(graph, item)
    _, eid, exp = item
    return f"t_{eid}" if exp == 1 else f"t_{eid}^{exp}"


def _format_conjugator(graph: GraphOfGroups, items: Sequence) -> str:
    return " ".join(_format_item(graph, item) for item in items) or "1"


def _format_steps(path: ConjugacyPath) -> List[str]:
    return [f"e{s.edge.id}{'+' if s.forward else '-'}" for s in path.steps]


def _path_json(graph: GraphOfGroups, path: ConjugacyPath) -> dict:
    return {
        "steps": _format_steps(path),
        "start": _format_word(graph, path.start),
        "end": _format_word(graph, path.end),
        "transitions": [
            {
                "vertex": t.vertex_id,
                "incoming": _format_word(graph, t.incoming),
                "outgoing": _format_word(graph, t.outgoing),
                "ratio": str(t.ratio),
            }
            for t in path.transitions()
        ],
        "ratio": str(path.ratio()),
        "conjugator": _format_conjugator(graph, path.conjugator_items()),
    }


def _complete_json(graph: GraphOfGroups, verdict: CompletePathVerdict) -> dict:
    i, j = verdict.witness
    return {
        "kind": "complete",
        "steps": _format_steps(verdict.path),
        "base_vertex": verdict.base_vertex,
        "base_word": _format_word(graph, verdict.base_word),
        "ratio": str(verdict.ratio),
        "level": verdict.level,
        "relation": {
            "exponents": [i, j],
            "conjugator": _format_conjugator(graph, verdict.path.conjugator_items()),
        },
        "verified": True,
    }


def _nonmax_json(graph: GraphOfGroups, nm: NonMaximalPath) -> dict:
    m, n = nm.path.witness_exponents()
    return {
        "kind": nm.kind,
        "steps": _format_steps(nm.path),
        "start": _format_word(graph, nm.path.start),
        "end": _format_word(graph, nm.path.end),
        "arrows": [[eid, "minus" if side == MINUS else "plus"] for eid, side in nm.arrows],
        "relation": {
            "exponents": [m, n],
            "conjugator": _format_conjugator(graph, nm.path.conjugator_items()),
        },
        "verified": True,
    }


def _graph_summary(graph: GraphOfGroups) -> dict:
    return {"vertices": len(graph.vertices), "edges": len(graph.edges)}


def _count(n: int, singular: str, plural: Optional[str] = None) -> str:
    return f"{n} {singular if n == 1 else (plural or singular + 's')}"


# -------------------------------------------------------------------- check


def _report_json(report: AnalysisReport) -> dict:
    graph = report.graph
    balance = report.balance
    hyper = report.hyperbolicity
    tri = report.trichotomy

    verdicts = {
        "balanced": balance.balanced,
        "bs_subgroup": None
        if balance.bs_tag is None
        else "BS({},{})".format(balance.bs_tag[0], balance.bs_tag[1] * balance.bs_sign),
        "modulus": [str(r) for r in balance.modulus],
        "word_hyperbolic": hyper.hyperbolic,
        "contains_baumslag_solitar": hyper.contains_baumslag_solitar,
        "acyl_hyperbolic": None if report.acyl is None else report.acyl.acyl_hyperbolic,
        "trichotomy": tri.branch,
        "free_rank": report.free_rank,
        "rel_hyp_note": report.rel_hyp_note,
        "notes": list(report.notes),
    }

    witnesses: dict = {}
    if balance.witness is not None:
        witnesses["balance"] = _complete_json(graph, balance.witness)
    if hyper.witness is not None:
        if isinstance(hyper.witness, CompletePathVerdict):
            witnesses["hyperbolicity"] = _complete_json(graph, hyper.witness)
        else:
            witnesses["hyperbolicity"] = _nonmax_json(graph, hyper.witness)
    if report.acyl is not None:
        acyl = report.acyl
        if acyl.acyl_hyperbolic:
            witnesses["acyl"] = {
                "condition": acyl.condition,
                "vertex": acyl.vertex,
                "evidence": [_format_word(graph, w) for w in acyl.evidence],
            }
        else:
            witnesses["acyl"] = {
                "snormal_generators": {
                    str(v): _format_word(graph, w)
                    for v, w in sorted(acyl.snormal_generators.items())
                },
                "verified": True,
            }
    if tri.branch == "surjects_Z" and tri.surjection_edges:
        witnesses["trichotomy"] = {"non_tree_edges": list(tri.surjection_edges)}
    elif tri.central is not None:
        reduced = report.reduced
        witnesses["trichotomy"] = {
            "central_element": _format_word(reduced, tri.central.element),
            "vertex_exponents": {
                str(v): x for v, x in sorted(tri.central.exponents.items())
            },
            "verified": True,
        }

    return {
        "verdicts": verdicts,
        "witnesses": witnesses,
        "reduction": {
            "reduced": _graph_summary(report.reduced),
            "trivial": report.reduced.is_trivial,
            # surviving vertices keep their original alphabets, so the
            # original graph can format every step's generator image
            "contractions": [step.to_json_dict(report.graph) for step in report.contractions],
        },
    }


def _render_check_text(report: AnalysisReport, body: dict) -> List[str]:
    verdicts = body["verdicts"]
    witnesses = body["witnesses"]
    lines = []
    red = body["reduction"]
    lines.append(
        "reduced graph: {}, {} ({})".format(
            _count(red["reduced"]["vertices"], "vertex", "vertices"),
            _count(red["reduced"]["edges"], "edge"),
            _count(len(red["contractions"]), "contraction"),
        )
    )
    bal = "balanced: {}".format(str(verdicts["balanced"]).lower())
    if verdicts["bs_subgroup"]:
        w = witnesses["balance"]
        bal += " — {} via chain {}: conjugates ({})^{} to ({})^{} by \"{}\"".format(
            verdicts["bs_subgroup"],
            " ".join(w["steps"]),
            w["base_word"],
            w["relation"]["exponents"][0],
            w["base_word"],
            w["relation"]["exponents"][1],
            w["relation"]["conjugator"],
        )
    lines.append(bal)
    if verdicts["modulus"]:
        lines.append("modulus ratios: " + ", ".join(verdicts["modulus"]))
    hyp = "word hyperbolic: {}".format(str(verdicts["word_hyperbolic"]).lower())
    if not verdicts["word_hyperbolic"]:
        w = witnesses["hyperbolicity"]
        hyp += " — contains a Baumslag-Solitar subgroup ({} path {})".format(
            w["kind"], " ".join(w["steps"])
        )
    lines.append(hyp)
    if verdicts["acyl_hyperbolic"] is None:
        lines.append("acylindrically hyperbolic: not applicable (free fundamental group)")
    else:
        acyl = "acylindrically hyperbolic: {}".format(
            str(verdicts["acyl_hyperbolic"]).lower()
        )
        w = witnesses["acyl"]
        if verdicts["acyl_hyperbolic"]:
            acyl += " — {} at vertex {}".format(w["condition"], w["vertex"])
            if w["evidence"]:
                acyl += " ({})".format(", ".join(w["evidence"]))
        else:
            acyl += " — s-normal generators: " + ", ".join(
                f"v{v}: {word}" for v, word in w["snormal_generators"].items()
            )
        lines.append(acyl)
    tri = "trichotomy: {}".format(verdicts["trichotomy"])
    w = witnesses.get("trichotomy")
    if w and "central_element" in w:
        tri += " — central element {} ({})".format(
            w["central_element"],
            ", ".join(f"v{v}: gen^{x}" for v, x in w["vertex_exponents"].items()),
        )
    elif w and "non_tree_edges" in w:
        tri += " — stable letter(s) of edge(s) {} generate the image".format(
            ", ".join(str(e) for e in w["non_tree_edges"])
        )
    if verdicts["free_rank"] is not None:
        tri += " — fundamental group is free of rank {}".format(verdicts["free_rank"])
    lines.append(tri)
    if verdicts["rel_hyp_note"]:
        lines.append("relative hyperbolicity: " + verdicts["rel_hyp_note"])
    for note in verdicts["notes"]:
        lines.append("note: " + note)
    return lines


def cmd_check(args, graph: GraphOfGroups, doc: dict) -> dict:
    report = analyze(graph)
    body = _report_json(report)
    doc.update(body)
    doc["text"] = _render_check_text(report, body)
    return doc


# --------------------------------------------------------------------- paths


def cmd_paths(args, graph: GraphOfGroups, doc: dict) -> dict:
    if args.kind == "complete":
        verdicts = enumerate_complete_paths(graph, max_edges_warn=args.max_edges_warn)
        listing = [_complete_json(graph, v) for v in verdicts]
        text = [
            "{} path {}: base {} at vertex {}, ratio {}, level {}".format(
                entry["kind"],
                " ".join(entry["steps"]),
                entry["base_word"],
                entry["base_vertex"],
                entry["ratio"],
                str(entry["level"]).lower(),
            )
            for entry in listing
        ]
    else:
        paths = enumerate_full_nonmaximal_paths(graph)
        listing = [_nonmax_json(graph, nm) for nm in paths]
        text = [
            "{} path {}: {} -> {}, arrows at {}".format(
                entry["kind"],
                " ".join(entry["steps"]),
                entry["start"],
                entry["end"],
                ", ".join(f"e{e} {side}" for e, side in entry["arrows"]),
            )
            for entry in listing
        ]
    doc["kind"] = args.kind
    doc["count"] = len(listing)
    doc["paths"] = listing
    doc["text"] = text or ["no paths"]
    return doc


# ---------------------------------------------------------------------- conj


def _parse_located_word(graph: GraphOfGroups, spec: str, flag: str) -> FreeWord:
    vertex_text, sep, word_text = spec.partition(":")
    if not sep:
        raise ParseError(f"{flag} wants '<vertex>:<word>', got {spec!r}")
    try:
        vid = int(vertex_text)
    except ValueError:
        raise ParseError(f"{flag}: bad vertex id {vertex_text!r}") from None
    if vid not in graph.vertices:
        raise ParseError(f"{flag}: unknown vertex {vid}")
    return graph.vertices[vid].parse(word_text)


def _parse_bounds(text: str) -> Tuple[int, int, int]:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise ParseError("--oracle-bounds wants 'SYLLABLES,EXPONENTS[,LETTERS]'")
    try:
        numbers = [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"--oracle-bounds: not integers: {text!r}") from None
    if any(n < 1 for n in numbers):
        raise ParseError("--oracle-bounds must be positive")
    syllables, exponents = numbers[0], numbers[1]
    letters = numbers[2] if len(numbers) == 3 else 2 * syllables
    return syllables, exponents, letters


def _answer_json(graph: GraphOfGroups, answer: ConjugacyAnswer) -> dict:
    out: dict = {"exists": answer.exists}
    if answer.exists:
        out["exponents"] = list(answer.exponents)
        out["conjugator"] = _format_conjugator(graph, answer.conjugator)
        out["route"] = answer.route
        if answer.path is not None:
            out["path"] = _path_json(graph, answer.path)
        out["verified"] = True
    return out


def _extra_path_relations(graph, engine, x, y, answer) -> List[dict]:
    """Path relations beyond the minimal answer (distinct exponent pairs).

    These matter when the transfer around some chain is non-level: for the
    one-loop graph with words a^2/a^3 they exhibit a^2 ~ a^3 even though the
    minimal self-conjugacy of a is the trivial (1, 1).
    """
    extras: List[dict] = []
    seen = {answer.exponents}
    for path in iter_conjugacy_paths(graph, x, y):
        m, n = path.witness_exponents()
        if (m, n) in seen:
            continue
        seen.add((m, n))
        items = path.conjugator_items()
        conj = engine.element_of(items)
        lhs = engine.conjugate(conj, engine.power(engine.embed(x), m))
        if not engine.equal(lhs, engine.power(engine.embed(y), n)):
            raise InternalInconsistencyError("extra path relation failed verification")
        extras.append(
            {
                "exponents": [m, n],
                "conjugator": _format_conjugator(graph, items),
                "steps": _format_steps(path),
                "verified": True,
            }
        )
    return extras


def cmd_conj(args, graph: GraphOfGroups, doc: dict) -> dict:
    x = _parse_located_word(graph, getattr(args, "from"), "--from")
    y = _parse_located_word(graph, args.to, "--to")
    answer = power_conjugate(graph, x, y)
    doc["from"] = {"vertex": int(x.vertex), "word": _format_word(graph, x)}
    doc["to"] = {"vertex": int(y.vertex), "word": _format_word(graph, y)}
    doc["answer"] = _answer_json(graph, answer)
    text = []
    if answer.exists:
        m, n = answer.exponents
        text.append(
            'exists: "{}" conjugates ({})^{} to ({})^{} [{}]'.format(
                doc["answer"]["conjugator"],
                doc["from"]["word"],
                m,
                doc["to"]["word"],
                n,
                answer.route,
            )
        )
        extras = _extra_path_relations(graph, Engine(graph), x, y, answer)
        if extras:
            doc["additional_relations"] = extras
            for extra in extras:
                text.append(
                    'also: "{}" conjugates ({})^{} to ({})^{} via {}'.format(
                        extra["conjugator"],
                        doc["from"]["word"],
                        extra["exponents"][0],
                        doc["to"]["word"],
                        extra["exponents"][1],
                        " ".join(extra["steps"]),
                    )
                )
    else:
        text.append("no powers of the two elements are conjugate")

    if args.oracle_bounds:
        syllables, exponents, letters = _parse_bounds(args.oracle_bounds)
        hit = brute_force_power_conjugacy(
            Engine(graph), x, y, max_syllables=syllables, max_letters=letters, max_exp=exponents
        )
        oracle: dict = {"bounds": {"syllables": syllables, "exponents": exponents, "letters": letters}}
        if hit is not None:
            oracle["hit"] = {
                "exponents": [hit.m, hit.n],
                "conjugator": _format_conjugator(graph, hit.conjugator),
            }
            if not answer.exists:
                raise InternalInconsistencyError(
                    "bounded search found a conjugacy the decider refuted"
                )
            oracle["agreement"] = "confirmed"
            text.append(
                'oracle agrees: "{}" conjugates x^{} to y^{}'.format(
                    oracle["hit"]["conjugator"], hit.m, hit.n
                )
            )
        else:
            oracle["hit"] = None
            oracle["agreement"] = "refuted within bounds" if not answer.exists else "inconclusive"
            text.append(
                "oracle found no relation within bounds ({})".format(oracle["agreement"])
            )
        doc["oracle"] = oracle
    doc["text"] = text
    return doc


# -------------------------------------------------------------------- oracle


def _relation_tokens(graph: GraphOfGroups, side: str, what: str) -> list:
    gen_home = {}
    for vid in sorted(graph.vertices):
        alphabet = graph.vertices[vid].alphabet
        for index, name in enumerate(alphabet.names, start=1):
            gen_home[name] = (vid, index)
    items = []
    for token in side.split():
        name, caret, exp_text = token.partition("^")
        if caret:
            try:
                exp = int(exp_text)
            except ValueError:
                raise ParseError(f"{what}: bad exponent in {token!r}") from None
            if exp == 0:
                raise ParseError(f"{what}: zero exponent in {token!r}")
        else:
            exp = 1
        if name == "t" or name.startswith("t_"):
            if name == "t":
                if len(graph.edges) != 1:
                    raise ParseError(
                        f"{what}: bare 't' is only unambiguous with a single edge; "
                        f"use t_<edge-id>"
                    )
                eid = next(iter(graph.edges))
            else:
                try:
                    eid = int(name[2:])
                except ValueError:
                    raise ParseError(f"{what}: bad stable letter {token!r}") from None
                if eid not in graph.edges:
                    raise ParseError(f"{what}: unknown edge in {token!r}")
            items.append(("t", eid, exp))
        elif name in gen_home:
            vid, index = gen_home[name]
            letter = index if exp > 0 else -index
            items.append(graph.vertices[vid].alphabet.word((letter,) * abs(exp)))
        else:
            raise ParseError(f"{what}: unknown generator or stable letter {token!r}")
    return items


def cmd_oracle(args, graph: GraphOfGroups, doc: dict) -> dict:
    lhs_text, eq, rhs_text = args.relation.partition("=")
    if not eq or "=" in rhs_text:
        raise ParseError("--relation wants exactly one '='")
    engine = Engine(graph)
    lhs = engine.element_of(_relation_tokens(graph, lhs_text, "left side"))
    rhs = engine.element_of(_relation_tokens(graph, rhs_text, "right side"))
    holds = engine.equal(lhs, rhs)
    doc["relation"] = args.relation.strip()
    doc["holds"] = holds
    doc["text"] = [str(holds).lower()]
    return doc


# ---------------------------------------------------------------------- main


def _base_document(command: str, path: str, data: bytes, graph: GraphOfGroups) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "gogz", "version": __version__},
        "command": command,
        "input": dict(
            path=path,
            sha256=hashlib.sha256(data).hexdigest(),
            **_graph_summary(graph),
        ),
    }


def _emit(doc: dict, args) -> None:
    text = doc.pop("text")
    if not args.no_timing:
        doc["timing"] = {"seconds": round(time.monotonic() - args.started, 6)}
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        header = "{} {} — {}, {}".format(
            doc["tool"]["name"],
            doc["command"],
            _count(doc["input"]["vertices"], "vertex", "vertices"),
            _count(doc["input"]["edges"], "edge"),
        )
        print(header)
        for line in text:
            print(line)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="graph of groups description file")
    common.add_argument(
        "--format", choices=("text", "json"), default="json", help="output format"
    )
    common.add_argument(
        "--no-timing",
        action="store_true",
        help="omit the timing field so reports are byte-identical",
    )
    common.add_argument(
        "--max-edges-warn",
        type=int,
        default=8,
        metavar="N",
        help="warn before enumerating closed chains on graphs with more edges",
    )

    parser = argparse.ArgumentParser(
        prog="gogz",
        description="Analyze a graph of groups with free vertices and cyclic edges.",
    )
    parser.add_argument("--version", action="version", version=f"gogz {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("check", parents=[common], help="run every decider with witnesses")

    p_paths = sub.add_parser("paths", parents=[common], help="enumerate certified paths")
    p_paths.add_argument(
        "--kind",
        choices=("complete", "nonmaximal"),
        required=True,
        help="closed complete chains or full non-maximal paths",
    )

    p_conj = sub.add_parser("conj", parents=[common], help="decide power conjugacy")
    p_conj.add_argument("--from", required=True, metavar="V:WORD", help="source element")
    p_conj.add_argument("--to", required=True, metavar="V:WORD", help="target element")
    p_conj.add_argument(
        "--oracle-bounds",
        metavar="S,E[,L]",
        help="cross-check against brute force: S syllables, exponents up to E, "
        "L total letters (default 2*S)",
    )

    p_oracle = sub.add_parser(
        "oracle", parents=[common], help="evaluate one relation in the group"
    )
    p_oracle.add_argument(
        "--relation",
        required=True,
        help='e.g. "t_0 a^2 t_0^-1 = a^3"; tokens are generators and t_<edge-id>',
    )
    return parser


_COMMANDS = {
    "check": cmd_check,
    "paths": cmd_paths,
    "conj": cmd_conj,
    "oracle": cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    args.started = time.monotonic()
    try:
        try:
            with open(args.file, "rb") as handle:
                data = handle.read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        graph = parse_graph(data.decode("utf-8"))
        doc = _base_document(args.command, args.file, data, graph)
        doc = _COMMANDS[args.command](args, graph, doc)
    except InternalInconsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except GogzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(doc, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
