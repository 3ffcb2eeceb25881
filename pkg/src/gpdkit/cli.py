"""
Linha de comando do gpdkit.

Uso:
    gpdkit validate z2.json
    gpdkit equiv z2.json tors2.json --format json
    gpdkit laws triv1.json z2.json rigid2.json tors2.json
    gpdkit enumerate z2.json rigid2.json --bound 12

Códigos de saída: 0 sucesso, 1 verificação falsa ou validação reprovada
(o relatório traz os detalhes), 2 erro de uso, de leitura ou estrutural
(só em stderr), 3 limite de oráculo excedido.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from gpdkit import __version__
from gpdkit._tables import as_dict, make_table
from gpdkit.config import OracleBounds, OutputFormat
from gpdkit.covers import (
    ExtendedCover,
    compose_cover_morphisms,
    enumerate_cover_morphisms,
    expected_star_count,
    extend_groupoid,
    invert_cover_morphism,
    is_cover_isomorphism,
    restrict_cover,
    star_determinacy_check,
    validate_cover,
    validate_cover_morphism,
)
from gpdkit.equivalence import (
    check_equivalence_laws,
    counit_epsilon,
    cover_of,
    describe_cover_morphism,
    functor_C_map,
    functor_G_map,
    unit_eta,
)
from gpdkit.exceptions import GpdkitError, MorphismError, SemanticError, UsageError
from gpdkit.families import (
    FamilyCover,
    family_from_components,
    independence_check,
    internality_census,
    relative_extend,
    relative_restrict,
    validate_family,
    validate_family_morphism,
)
from gpdkit.formatters import emit_report
from gpdkit.groupoid import (
    aut_group,
    connected_components,
    faithful_base,
    is_connected,
    require_object,
    validate_groupoid,
)
from gpdkit.models import ValidationReport
from gpdkit.morphisms import (
    EquivalenceWitness,
    GroupoidEmbedding,
    compose_morphism,
    decide_equivalence,
    enumerate_morphisms,
    is_isomorphism,
    saturate_morphism,
    validate_embedding,
    validate_morphism,
)
from gpdkit.serialization import (
    Document,
    DocumentKind,
    document_for,
    document_to_dict,
    load_document,
)

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, OracleBounds], dict]


# =============================================================================
# LEITURA DE ARGUMENTOS
# =============================================================================


def _load(path: str, *kinds: DocumentKind, validate: bool = True) -> Document:
    doc = load_document(path, validate=validate)
    if kinds and doc.kind not in kinds:
        expected = " ou ".join(k.value for k in kinds)
        raise UsageError(f"{path}: esperado documento {expected}, recebido {doc.kind.value}")
    return doc


def _payload(path: str, *kinds: DocumentKind) -> Any:
    return _load(path, *kinds).payload


def _parse_seed(raw: str) -> tuple[str, str, tuple]:
    """'i1:i2:a=x,b=y' -> (i1, i2, tabela)."""
    try:
        i1, i2, body = raw.split(":", 2)
        pairs = [item.split("=", 1) for item in body.split(",") if item]
        if any(len(p) != 2 for p in pairs):
            raise ValueError(raw)
    except ValueError:
        raise UsageError(f"semente malformada: {raw!r} (use i1:i2:a=x,b=y)")
    return i1, i2, make_table((a, b) for a, b in pairs)


def _parse_assignments(items: Optional[list[str]], what: str) -> Optional[dict[str, str]]:
    if not items:
        return None
    out: dict[str, str] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key or not value:
            raise UsageError(f"{what} malformada: {item!r} (use chave=valor)")
        out[key] = value
    return out


def _report(command: str, ok: bool, **fields: Any) -> dict:
    return {"command": command, "ok": ok, **fields}


def _validation(command: str, report: ValidationReport, **fields: Any) -> dict:
    return _report(
        command,
        report.ok,
        violations=[v.to_dict() for v in report.violations],
        **fields,
    )


def _doc(value: Any) -> dict:
    return document_to_dict(document_for(value))


def _embedding_summary(e: GroupoidEmbedding) -> dict:
    return {"iota": dict(e.iota), "maps": {i: as_dict(t) for i, t in e.per_object.items()}}


def _witness(w: EquivalenceWitness) -> dict:
    return {
        "common": _doc(w.common),
        "left": _embedding_summary(w.embed_left),
        "right": _embedding_summary(w.embed_right),
    }


# =============================================================================
# COMANDOS
# =============================================================================


def _cmd_validate(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    doc = _load(args.file, validate=False)
    value = doc.payload
    if doc.kind is DocumentKind.GROUPOID:
        report = validate_groupoid(value)
    elif doc.kind is DocumentKind.FAMILY:
        report = validate_family(value)
    elif doc.kind is DocumentKind.MORPHISM:
        report = validate_morphism(value)
    elif doc.kind is DocumentKind.EMBEDDING:
        report = validate_embedding(value)
    elif doc.kind is DocumentKind.COVER_MORPHISM:
        report = validate_cover_morphism(value)
    elif doc.kind is DocumentKind.FAMILY_MORPHISM:
        report = validate_family_morphism(value)
    elif isinstance(value, ExtendedCover):
        report = validate_cover(value)
    else:
        report = _validate_family_cover(value)
    return _validation("validate", report, kind=doc.kind.value)


def _validate_family_cover(fc: FamilyCover) -> ValidationReport:
    merged = validate_family(fc.family).violations
    for a in fc.base:
        merged += validate_cover(fc.fibre_covers[a]).violations
    return ValidationReport("family-cover", merged)


def _cmd_components(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g = _payload(args.file, DocumentKind.GROUPOID)
    return _report(
        "components",
        True,
        components=[list(c) for c in connected_components(g)],
        connected=is_connected(g),
    )


def _cmd_aut(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g = _payload(args.file, DocumentKind.GROUPOID)
    group = aut_group(g, args.object)
    return _report(
        "aut",
        True,
        object=args.object,
        order=group.order,
        elements=[as_dict(t) for t in sorted(group.elements)],
    )


def _cmd_base(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g = _payload(args.file, DocumentKind.GROUPOID)
    return _report("base", True, object=args.object, base=list(faithful_base(g, args.object).tuple))


def _cmd_extend(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g = _payload(args.file, DocumentKind.GROUPOID)
    cover = extend_groupoid(g, args.object, star_object=args.star)
    return _report(
        "extend",
        True,
        cover=_doc(cover),
        star_morphisms=len(cover.star_morphisms),
        expected_star_morphisms=expected_star_count(g, args.object),
    )


def _cmd_restrict(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    cover = _payload(args.file, DocumentKind.COVER)
    return _report("restrict", True, groupoid=_doc(restrict_cover(cover)))


def _cmd_morphism_check(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    h = _load(args.file, DocumentKind.MORPHISM, validate=False).payload
    return _validation("morphism-check", validate_morphism(h))


def _cmd_saturate(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    source = _payload(args.source, DocumentKind.GROUPOID)
    target = _payload(args.target, DocumentKind.GROUPOID)
    seeds = [_parse_seed(raw) for raw in args.seed]
    try:
        h = saturate_morphism(source, target, seeds)
    except MorphismError as e:
        violation = e.violation.to_dict() if e.violation else None
        return _report("saturate", False, error=e.message, violation=violation)
    return _report("saturate", True, morphism=_doc(h))


def _cmd_compose(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g = _payload(args.first, DocumentKind.MORPHISM)
    h = _payload(args.second, DocumentKind.MORPHISM)
    return _report("compose", True, morphism=_doc(compose_morphism(g, h)))


def _cmd_iso(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    h = _payload(args.file, DocumentKind.MORPHISM)
    iso, inverse = is_isomorphism(h)
    return _report(
        "iso", iso, isomorphism=iso, inverse=_doc(inverse) if inverse is not None else None
    )


def _cmd_equiv(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g1 = _payload(args.first, DocumentKind.GROUPOID)
    g2 = _payload(args.second, DocumentKind.GROUPOID)
    decision = decide_equivalence(g1, g2)
    return _report(
        "equiv",
        decision.equivalent,
        equivalent=decision.equivalent,
        reason=decision.reason,
        beta=as_dict(decision.beta) if decision.beta is not None else None,
        witness=_witness(decision.witness) if decision.witness is not None else None,
    )


def _cmd_cover_morphism_check(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    c = _load(args.file, DocumentKind.COVER_MORPHISM, validate=False).payload
    return _validation("cover-morphism-check", validate_cover_morphism(c))


def _cmd_cover_compose(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g = _payload(args.first, DocumentKind.COVER_MORPHISM)
    h = _payload(args.second, DocumentKind.COVER_MORPHISM)
    composite = compose_cover_morphisms(g, h)
    return _report(
        "cover-compose",
        True,
        cover_morphism=_doc(composite),
        canonical_rep=list(composite.canonical_rep),
    )


def _cmd_cover_iso(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    c = _payload(args.file, DocumentKind.COVER_MORPHISM)
    iso = is_cover_isomorphism(c)
    inverse = _doc(invert_cover_morphism(c)) if iso else None
    return _report("cover-iso", iso, isomorphism=iso, inverse=inverse)


def _cmd_determinacy(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    cover = _payload(args.file, DocumentKind.COVER, DocumentKind.RAW_STRUCTURE)
    if not isinstance(cover, ExtendedCover):
        raise UsageError(f"{args.file}: determinacy exige uma cobertura de um objeto base")
    return _validation("determinacy", star_determinacy_check(cover))


def _cmd_functor_g(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    c = _payload(args.file, DocumentKind.COVER_MORPHISM)
    return _report("functor-g", True, morphism=_doc(functor_G_map(c)))


def _cmd_functor_c(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    h = _payload(args.file, DocumentKind.MORPHISM)
    v1 = extend_groupoid(h.source, args.source_base or h.source.object_ids[0])
    v2 = extend_groupoid(h.target, args.target_base or h.target.object_ids[0])
    image = functor_C_map(h, v1, v2)
    return _report(
        "functor-c",
        True,
        cover_morphism=_doc(image),
        canonical_rep=list(image.canonical_rep),
    )


def _cmd_eta(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    cover = _payload(args.file, DocumentKind.COVER)
    eta = unit_eta(cover, args.target_base)
    return _report(
        "eta",
        True,
        cover_morphism=_doc(eta),
        description=describe_cover_morphism(eta),
    )


def _cmd_epsilon(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g = _payload(args.file, DocumentKind.GROUPOID)
    obj = args.object or g.object_ids[0]
    require_object(g, obj)
    return _report("epsilon", True, object=obj, morphism=_doc(counit_epsilon(g, obj)))


def _cmd_laws(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    corpus = {}
    for path in args.files:
        name = Path(path).stem
        if name in corpus:
            raise UsageError(f"nome repetido no corpus: {name}")
        corpus[name] = _payload(path, DocumentKind.GROUPOID)
    report = check_equivalence_laws(corpus, bounds)
    body = report.to_dict()
    body.pop("ok")
    return _report("laws", report.ok, **body)


def _cmd_family_split(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g = _payload(args.file, DocumentKind.GROUPOID)
    return _report("family-split", True, family=_doc(family_from_components(g)))


def _cmd_family_extend(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    fam = _payload(args.file, DocumentKind.FAMILY)
    section = _parse_assignments(args.section, "seção")
    fc = relative_extend(fam, section, bounds)
    return _report("family-extend", True, family_cover=_doc(fc))


def _family_cover(path: str) -> FamilyCover:
    fc = _payload(path, DocumentKind.FAMILY_COVER, DocumentKind.RAW_STRUCTURE)
    if not isinstance(fc, FamilyCover):
        raise UsageError(f"{path}: esperado cobertura de família")
    return fc


def _cmd_family_restrict(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    fc = _family_cover(args.file)
    return _report("family-restrict", True, family=_doc(relative_restrict(fc)))


def _cmd_independence(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    return _validation("independence", independence_check(_family_cover(args.file), bounds))


def _cmd_census(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    census = internality_census(_family_cover(args.file))
    return _report("census", True, **census.to_dict())


def _cmd_family_morphism_check(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    fm = _load(args.file, DocumentKind.FAMILY_MORPHISM, validate=False).payload
    report = validate_family_morphism(fm, functor_laws=args.functor_laws)
    return _validation("family-morphism-check", report)


def _cmd_enumerate(args: argparse.Namespace, bounds: OracleBounds) -> dict:
    g1 = _payload(args.first, DocumentKind.GROUPOID)
    g2 = _payload(args.second, DocumentKind.GROUPOID)
    if args.covers:
        classes = enumerate_cover_morphisms(cover_of(g1), cover_of(g2), bounds)
        return _report(
            "enumerate",
            True,
            count=len(classes),
            cover_morphisms=[list(c.canonical_rep) for c in classes],
        )
    morphisms = enumerate_morphisms(g1, g2, bounds)
    return _report(
        "enumerate",
        True,
        count=len(morphisms),
        morphisms=[_doc(h)["functions"] for h in morphisms],
    )


# =============================================================================
# PARSER
# =============================================================================


def _global_options(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value: Any) -> Any:
        return argparse.SUPPRESS if suppress else value

    parser.add_argument(
        "--format",
        choices=[f.value for f in OutputFormat],
        default=default(OutputFormat.TEXT.value),
        help="Formato do relatório (default: text)",
    )
    parser.add_argument(
        "--bound",
        type=int,
        default=default(None),
        help="Limite da soma dos carriers nos oráculos (ou use GPDKIT_BOUND)",
    )
    parser.add_argument(
        "--verbose",
        action="store_true",
        default=default(False),
        help="Log de depuração em stderr",
    )


def build_parser() -> argparse.ArgumentParser:
    """Parser com todos os subcomandos."""
    parser = argparse.ArgumentParser(
        prog="gpdkit",
        description="Motor de grupoides concretos finitos e suas coberturas internas",
    )
    parser.add_argument("--version", action="version", version=f"gpdkit {__version__}")
    _global_options(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def command(name: str, handler: Handler, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help, parents=[common])
        p.set_defaults(handler=handler)
        return p

    p = command("validate", _cmd_validate, "Valida um documento de qualquer tipo")
    p.add_argument("file")
    p = command("components", _cmd_components, "Componentes conexas de um grupoide")
    p.add_argument("file")
    p = command("aut", _cmd_aut, "Grupo de automorfismos de um objeto")
    p.add_argument("file")
    p.add_argument("object")
    p = command("base", _cmd_base, "Base fiel de um objeto")
    p.add_argument("file")
    p.add_argument("object")
    p = command("extend", _cmd_extend, "Extensão por um objeto estrela")
    p.add_argument("file")
    p.add_argument("object")
    p.add_argument("--star", help="Identificador do objeto estrela (default: star)")
    p = command("restrict", _cmd_restrict, "Grupoide subjacente de uma cobertura")
    p.add_argument("file")
    p = command("morphism-check", _cmd_morphism_check, "Valida um morfismo de grupoides")
    p.add_argument("file")
    p = command("saturate", _cmd_saturate, "Satura sementes num morfismo")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--seed", action="append", required=True, help="i1:i2:a=x,b=y (repetível)")
    p = command("compose", _cmd_compose, "Composição de dois morfismos (segundo∘primeiro)")
    p.add_argument("first")
    p.add_argument("second")
    p = command("iso", _cmd_iso, "Decide se um morfismo é isomorfismo")
    p.add_argument("file")
    p = command("equiv", _cmd_equiv, "Decide equivalência de dois grupoides conexos")
    p.add_argument("first")
    p.add_argument("second")
    p = command("cover-morphism-check", _cmd_cover_morphism_check, "Valida um morfismo de coberturas")
    p.add_argument("file")
    p = command("cover-compose", _cmd_cover_compose, "Composição de morfismos de coberturas")
    p.add_argument("first")
    p.add_argument("second")
    p = command("cover-iso", _cmd_cover_iso, "Decide se um morfismo de coberturas é isomorfismo")
    p.add_argument("file")
    p = command("determinacy", _cmd_determinacy, "Determinação da estrela pela base fiel")
    p.add_argument("file")
    p = command("functor-g", _cmd_functor_g, "Aplica G a um morfismo de coberturas")
    p.add_argument("file")
    p = command("functor-c", _cmd_functor_c, "Aplica C a um morfismo de grupoides")
    p.add_argument("file")
    p.add_argument("--source-base", help="Objeto base da cobertura de origem")
    p.add_argument("--target-base", help="Objeto base da cobertura de destino")
    p = command("eta", _cmd_eta, "Unidade η de uma cobertura")
    p.add_argument("file")
    p.add_argument("--target-base", help="Objeto base do destino de η")
    p = command("epsilon", _cmd_epsilon, "Counidade ε de um grupoide")
    p.add_argument("file")
    p.add_argument("--object", help="Objeto da extensão (default: primeiro)")
    p = command("laws", _cmd_laws, "Verifica as leis da equivalência sobre um corpus")
    p.add_argument("files", nargs="+")
    p = command("family-split", _cmd_family_split, "Família das componentes conexas")
    p.add_argument("file")
    p = command("family-extend", _cmd_family_extend, "Extensão relativa de uma família")
    p.add_argument("file")
    p.add_argument("--section", action="append", help="fibra=objeto (repetível)")
    p = command("family-restrict", _cmd_family_restrict, "Família subjacente de uma cobertura")
    p.add_argument("file")
    p = command("independence", _cmd_independence, "Independência das fibras (busca exaustiva)")
    p.add_argument("file")
    p = command("census", _cmd_census, "Fibras com Aut(estrela) não trivial")
    p.add_argument("file")
    p = command("family-morphism-check", _cmd_family_morphism_check, "Valida um morfismo de famílias")
    p.add_argument("file")
    p.add_argument("--functor-laws", action="store_true", help="Verifica também G_A e C_A por fibra")
    p = command("enumerate", _cmd_enumerate, "Enumera morfismos (oráculo limitado)")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--covers", action="store_true", help="Enumera classes de morfismos de coberturas")
    return parser


# =============================================================================
# ENTRADA
# =============================================================================


def _configure_logging(verbose: bool) -> None:
    level = "DEBUG" if verbose else os.environ.get("GPDKIT_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    """Executa um comando e devolve o código de saída.

    O relatório vai para stdout; erros de código 2 e 3 só para stderr.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    _configure_logging(args.verbose)
    bounds = OracleBounds.from_env().with_bound(args.bound)
    logger.debug(f"comando {args.command} com limites {bounds}")

    try:
        result = args.handler(args, bounds)
    except SemanticError as e:
        result = _validation(args.command, e.report, error=e.message)
    except GpdkitError as e:
        if e.exit_code != 1:
            print(f"gpdkit: erro: {e}", file=sys.stderr)
            return e.exit_code
        result = _report(args.command, False, error=str(e), subjects=list(e.subjects))

    sys.stdout.write(emit_report(result, args.format))
    return 0 if result["ok"] else 1


def main() -> None:
    """Entry point do comando gpdkit."""
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
