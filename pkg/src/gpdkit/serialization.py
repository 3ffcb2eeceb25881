"""
Formato de arquivo do gpdkit (JSON canônico).

Todo documento tem "kind" e "format_version" no topo. Exemplo de grupoide:

    {
      "format_version": 1,
      "kind": "groupoid",
      "morphisms": [{"dst": "o", "id": "m0", "map": {"a": "a"}, "src": "o"}],
      "objects": [{"elements": ["a"], "id": "o"}]
    }

Famílias acrescentam "base" e "fiber" por objeto; coberturas acrescentam
"star": {"base_object": ...} (a estrutura estrela é derivada, nunca
escrita à mão, exceto em documentos "raw-structure" usados em testes
adversariais). Morfismos referenciam origem e destino por caminho de
arquivo ou inline.

A serialização é canônica: chaves ordenadas, indentação 2, objetos e
morfismos ordenados por identificador, rótulos de carrier na ordem
declarada (a ordem é semântica: é a da base fiel).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Optional, Union

from gpdkit._tables import Table, as_dict, make_table
from gpdkit.config import FORMAT_VERSION, IDENTIFIER_RE
from gpdkit.covers import (
    CoverMorphism,
    ExtendedCover,
    StarElement,
    StarKind,
    StarRecord,
    extend_groupoid,
    validate_cover_morphism,
)
from gpdkit.exceptions import (
    DocumentSyntaxError,
    FamilyError,
    StructuralError,
    UsageError,
    VersionError,
)
from gpdkit.families import (
    CoverFamilyMorphism,
    FamilyCover,
    GroupoidFamily,
    GroupoidFamilyMorphism,
    StarPoint,
    fibre,
    relative_extend,
    validate_family,
    validate_family_morphism,
)
from gpdkit.groupoid import FiniteGroupoid, validate_groupoid
from gpdkit.morphisms import GroupoidEmbedding, GroupoidMorphism, validate_embedding, validate_morphism

logger = logging.getLogger(__name__)


class DocumentKind(str, Enum):
    """Tipos de documento aceitos."""
    GROUPOID = "groupoid"
    MORPHISM = "morphism"
    EMBEDDING = "embedding"
    COVER = "cover"
    COVER_MORPHISM = "cover-morphism"
    FAMILY = "family"
    FAMILY_COVER = "family-cover"
    FAMILY_MORPHISM = "family-morphism"
    RAW_STRUCTURE = "raw-structure"


@dataclass(frozen=True)
class Document:
    """Documento lido ou a escrever: tipo, valor de domínio e versão."""

    kind: DocumentKind
    payload: Any
    format_version: int = FORMAT_VERSION


@dataclass(frozen=True)
class _Context:
    base_dir: Path
    validate: bool


# =============================================================================
# LEITURA
# =============================================================================


def parse_document(
    text: Union[str, bytes],
    base_dir: Optional[Path] = None,
    validate: bool = True,
) -> Document:
    """Parse estrutural seguido de validação semântica.

    Args:
        text: conteúdo do arquivo
        base_dir: diretório para resolver referências por caminho
        validate: se False, pula o validador do tipo principal (usado pelos
            comandos que reportam violações em vez de recusar a entrada)

    Raises:
        DocumentSyntaxError: JSON inválido (com linha e coluna).
        VersionError: format_version ausente ou diferente de 1.
        StructuralError: campos ausentes, identificadores inválidos, tabelas não totais.
        SemanticError: o valor não passa no validador do seu tipo.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise DocumentSyntaxError(f"documento não é UTF-8: {e.reason}")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(e.msg, e.lineno, e.colno)
    return _decode(data, _Context(base_dir or Path.cwd(), validate))


def load_document(path: Union[str, Path], validate: bool = True) -> Document:
    """Lê e interpreta um documento do disco.

    Raises:
        UsageError: arquivo inexistente ou ilegível.
    """
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise UsageError(f"não foi possível ler {path}: {e.strerror}")
    logger.debug(f"lendo {path}")
    return parse_document(raw, base_dir=path.parent, validate=validate)


def _decode(data: Any, ctx: _Context) -> Document:
    if not isinstance(data, dict):
        raise StructuralError("documento deve ser um objeto JSON")
    version = data.get("format_version")
    if isinstance(version, bool) or version != FORMAT_VERSION:
        raise VersionError(f"format_version não suportado: {version!r}")
    try:
        kind = DocumentKind(data.get("kind"))
    except ValueError:
        raise StructuralError(f"kind desconhecido: {data.get('kind')!r}")
    return Document(kind, _DECODERS[kind](data, ctx), version)


_REQUIRED = object()


def _field(data: dict, key: str, expected: type, default: Any = _REQUIRED) -> Any:
    """Campo com tipo verificado; `default` vale só quando a chave está ausente."""
    if key not in data and default is not _REQUIRED:
        return default
    value = data.get(key)
    if not isinstance(value, expected):
        raise StructuralError(f"campo '{key}' ausente ou com tipo inválido")
    return value


def _ident(value: Any) -> str:
    if not isinstance(value, str) or not IDENTIFIER_RE.match(value):
        raise StructuralError("identificador inválido", [repr(value)])
    return value


def _table(raw: Any) -> Table:
    if not isinstance(raw, dict):
        raise StructuralError("mapa deve ser um objeto rótulo -> rótulo")
    return make_table((_ident(a), _ident(b)) for a, b in raw.items())


def _objects(data: dict) -> list[dict]:
    entries = _field(data, "objects", list)
    seen: set[str] = set()
    for entry in entries:
        if not isinstance(entry, dict):
            raise StructuralError("entrada de objeto deve ser um objeto JSON")
        obj = _ident(entry.get("id"))
        if obj in seen:
            raise StructuralError("objeto repetido", [obj])
        seen.add(obj)
    return entries


def _build_groupoid(data: dict) -> FiniteGroupoid:
    objects = {
        entry["id"]: [_ident(a) for a in _field(entry, "elements", list)]
        for entry in _objects(data)
    }
    morphisms = []
    for entry in _field(data, "morphisms", list, default=[]):
        if not isinstance(entry, dict):
            raise StructuralError("entrada de morfismo deve ser um objeto JSON")
        morphisms.append(
            (
                _ident(entry.get("id")),
                _ident(entry.get("src")),
                _ident(entry.get("dst")),
                _table(entry.get("map")),
            )
        )
    return FiniteGroupoid.build(objects, morphisms)


def _decode_groupoid(data: dict, ctx: _Context) -> FiniteGroupoid:
    g = _build_groupoid(data)
    if ctx.validate:
        validate_groupoid(g).raise_if_invalid("grupoide inválido")
    return g


def _decode_family(data: dict, ctx: _Context) -> GroupoidFamily:
    g = _build_groupoid(data)
    base = tuple(_ident(a) for a in _field(data, "base", list))
    if len(set(base)) != len(base):
        raise StructuralError("identificador de base repetido", sorted(base))
    obj_base = {entry["id"]: _ident(entry.get("fiber")) for entry in _objects(data)}
    fam = GroupoidFamily(g, base, {o: obj_base[o] for o in g.object_ids})
    report = validate_family(fam)
    if ctx.validate:
        report.raise_if_invalid("família inválida")
    return fam


def _star_spec(data: dict) -> dict:
    star = _field(data, "star", dict)
    _ident(star.get("base_object"))
    if "object" in star:
        _ident(star["object"])
    return star


def _decode_cover(data: dict, ctx: _Context) -> ExtendedCover:
    g = _build_groupoid(data)
    star = _star_spec(data)
    return extend_groupoid(g, star["base_object"], star_object=star.get("object"))


def _section(data: dict) -> Optional[dict[str, str]]:
    raw = data.get("section")
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise StructuralError("seção deve ser um objeto base -> objeto")
    return {_ident(a): _ident(o) for a, o in raw.items()}


def _decode_family_cover(data: dict, ctx: _Context) -> FamilyCover:
    fam = _decode_family(data, _Context(ctx.base_dir, True))
    return relative_extend(fam, _section(data))


def _record(entry: Any) -> StarRecord:
    if not isinstance(entry, dict):
        raise StructuralError("registro estrela deve ser um objeto JSON")
    try:
        kind = StarKind(entry.get("kind"))
    except ValueError:
        raise StructuralError(f"kind de registro desconhecido: {entry.get('kind')!r}")
    tag = entry.get("tag")
    if isinstance(tag, bool) or tag not in (0, 1, 2):
        raise StructuralError(f"tag inválida: {tag!r}")
    return StarRecord(
        kind,
        _ident(entry.get("underlying")),
        tag,
        _ident(entry.get("src")),
        _ident(entry.get("dst")),
        _table(entry.get("map")),
    )


def _decode_raw(data: dict, ctx: _Context) -> Union[ExtendedCover, FamilyCover]:
    """Estrutura escrita à mão: só a forma é verificada, nunca os invariantes."""
    if "base" in data:
        fc = _decode_family_cover(data, ctx)
        extra = tuple(_record(e) for e in _field(data, "extra_records", list, default=[]))
        fc = replace(fc, extra_records=extra)
        _ = fc.total_structure
        return fc

    g = _build_groupoid(data)
    star = _star_spec(data)
    base_object = star["base_object"]
    if base_object not in g.carriers:
        raise StructuralError("objeto base desconhecido", [base_object])
    cover = ExtendedCover(
        g,
        base_object,
        star.get("object", "star"),
        tuple(StarElement(a) for a in g.carriers[base_object]),
        tuple(_record(e) for e in _field(data, "records", list)),
    )
    _ = cover.total
    return cover


def _nested(value: Any, ctx: _Context, kind: DocumentKind) -> Any:
    """Origem/destino: caminho relativo ao documento ou documento inline."""
    if isinstance(value, str):
        doc = load_document(ctx.base_dir / value)
    elif isinstance(value, dict):
        doc = _decode(value, _Context(ctx.base_dir, True))
    else:
        raise StructuralError("referência deve ser caminho ou documento inline")
    if doc.kind is not kind:
        raise StructuralError(f"esperado documento {kind.value}, recebido {doc.kind.value}")
    return doc.payload


def _functions(raw: Any) -> tuple[dict[str, tuple[str, str]], dict[str, Table]]:
    if not isinstance(raw, list):
        raise StructuralError("campo 'functions' ausente ou com tipo inválido")
    legs: dict[str, tuple[str, str]] = {}
    tables: dict[str, Table] = {}
    for entry in raw:
        if not isinstance(entry, dict):
            raise StructuralError("função deve ser um objeto JSON")
        n = _ident(entry.get("index"))
        if n in legs:
            raise StructuralError("índice repetido", [n])
        legs[n] = (_ident(entry.get("src")), _ident(entry.get("dst")))
        tables[n] = _table(entry.get("map"))
    return legs, tables


def _decode_morphism(data: dict, ctx: _Context) -> GroupoidMorphism:
    source = _nested(data.get("source"), ctx, DocumentKind.GROUPOID)
    target = _nested(data.get("target"), ctx, DocumentKind.GROUPOID)
    h = GroupoidMorphism(source, target, *_functions(data.get("functions")))
    report = validate_morphism(h)
    if ctx.validate:
        report.raise_if_invalid("morfismo inválido")
    return h


def _decode_embedding(data: dict, ctx: _Context) -> GroupoidEmbedding:
    source = _nested(data.get("source"), ctx, DocumentKind.GROUPOID)
    target = _nested(data.get("target"), ctx, DocumentKind.GROUPOID)
    iota = {_ident(i): _ident(j) for i, j in _field(data, "iota", dict).items()}
    maps = {_ident(i): _table(t) for i, t in _field(data, "maps", dict).items()}
    e = GroupoidEmbedding(source, target, iota, maps)
    report = validate_embedding(e)
    if ctx.validate:
        report.raise_if_invalid("mergulho inválido")
    return e


def _decode_cover_morphism(data: dict, ctx: _Context) -> CoverMorphism:
    source = _nested(data.get("source"), ctx, DocumentKind.COVER)
    target = _nested(data.get("target"), ctx, DocumentKind.COVER)
    c = CoverMorphism(source, target, _table(data.get("map")))
    report = validate_cover_morphism(c)
    if ctx.validate:
        report.raise_if_invalid("morfismo de coberturas inválido")
    return c


def _point(entry: dict, side: str) -> StarPoint:
    return StarPoint(_ident(entry.get(f"{side}_fiber")), _ident(entry.get(side)))


def _decode_family_morphism(
    data: dict, ctx: _Context
) -> Union[GroupoidFamilyMorphism, CoverFamilyMorphism]:
    side = data.get("side")
    if side == "groupoid":
        source = _nested(data.get("source"), ctx, DocumentKind.FAMILY)
        target = _nested(data.get("target"), ctx, DocumentKind.FAMILY)
        if source.base != target.base:
            raise FamilyError("bases diferentes", [*source.base, *target.base])
        components = {
            _ident(a): GroupoidMorphism(fibre(source, a), fibre(target, a), *_functions(raw))
            for a, raw in _field(data, "components", dict).items()
        }
        fm: Union[GroupoidFamilyMorphism, CoverFamilyMorphism] = GroupoidFamilyMorphism(
            source, target, components
        )
    elif side == "cover":
        source = _nested(data.get("source"), ctx, DocumentKind.FAMILY_COVER)
        target = _nested(data.get("target"), ctx, DocumentKind.FAMILY_COVER)
        pairs = []
        for entry in _field(data, "map", list):
            if not isinstance(entry, dict):
                raise StructuralError("entrada de mapa deve ser um objeto JSON")
            pairs.append((_point(entry, "src"), _point(entry, "dst")))
        fm = CoverFamilyMorphism(source, target, tuple(sorted(pairs)))
    else:
        raise StructuralError(f"side deve ser 'groupoid' ou 'cover', recebido {side!r}")
    report = validate_family_morphism(fm)
    if ctx.validate:
        report.raise_if_invalid("morfismo de famílias inválido")
    return fm


_DECODERS: dict[DocumentKind, Callable[[dict, _Context], Any]] = {
    DocumentKind.GROUPOID: _decode_groupoid,
    DocumentKind.MORPHISM: _decode_morphism,
    DocumentKind.EMBEDDING: _decode_embedding,
    DocumentKind.COVER: _decode_cover,
    DocumentKind.COVER_MORPHISM: _decode_cover_morphism,
    DocumentKind.FAMILY: _decode_family,
    DocumentKind.FAMILY_COVER: _decode_family_cover,
    DocumentKind.FAMILY_MORPHISM: _decode_family_morphism,
    DocumentKind.RAW_STRUCTURE: _decode_raw,
}


# =============================================================================
# ESCRITA
# =============================================================================


def serialize_document(doc: Document) -> str:
    """JSON canônico: chaves ordenadas, indentação 2, quebra de linha final."""
    return json.dumps(document_to_dict(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def document_to_dict(doc: Document) -> dict:
    body = _ENCODERS[doc.kind](doc.payload)
    return {"kind": doc.kind.value, "format_version": doc.format_version, **body}


def document_for(value: Any) -> Document:
    """Embrulha um valor de domínio no documento do seu tipo."""
    for kind, cls in _KIND_OF_TYPE:
        if isinstance(value, cls):
            return Document(kind, value)
    raise TypeError(f"sem formato de documento para {type(value).__name__}")


def _encode_groupoid(g: FiniteGroupoid, fibres: Optional[dict[str, str]] = None) -> dict:
    objects = []
    for obj, carrier in sorted(g.carriers.items()):
        entry: dict[str, Any] = {"id": obj, "elements": list(carrier)}
        if fibres is not None:
            entry["fiber"] = fibres[obj]
        objects.append(entry)
    return {
        "objects": objects,
        "morphisms": [
            {"id": a.id, "src": a.src, "dst": a.dst, "map": as_dict(a.table)}
            for a in sorted(g, key=lambda a: a.id)
        ],
    }


def _encode_family(fam: GroupoidFamily) -> dict:
    return {**_encode_groupoid(fam.total, fam.obj_base), "base": list(fam.base)}


def _encode_cover(v: ExtendedCover) -> dict:
    star = {"base_object": v.base_object, "object": v.star_object}
    return {**_encode_groupoid(v.base), "star": star}


def _encode_family_cover(fc: FamilyCover) -> dict:
    return {**_encode_family(fc.family), "section": dict(fc.section)}


def _encode_record(r: StarRecord) -> dict:
    return {
        "kind": r.kind.value,
        "underlying": r.underlying,
        "tag": r.tag,
        "src": r.src,
        "dst": r.dst,
        "map": as_dict(r.table),
    }


def _encode_raw(value: Union[ExtendedCover, FamilyCover]) -> dict:
    if isinstance(value, FamilyCover):
        extra = sorted(value.extra_records, key=lambda r: r.id)
        return {**_encode_family_cover(value), "extra_records": [_encode_record(r) for r in extra]}
    records = sorted(value.star_morphisms, key=lambda r: r.id)
    return {**_encode_cover(value), "records": [_encode_record(r) for r in records]}


def _inline(kind: DocumentKind, value: Any) -> dict:
    return document_to_dict(Document(kind, value))


def _encode_functions(h: GroupoidMorphism) -> list[dict]:
    canonical = GroupoidMorphism.from_functions(h.source, h.target, h.function_set)
    return [
        {"index": n, "src": i1, "dst": i2, "map": as_dict(canonical.tables[n])}
        for n, (i1, i2) in canonical.legs.items()
    ]


def _encode_morphism(h: GroupoidMorphism) -> dict:
    return {
        "source": _inline(DocumentKind.GROUPOID, h.source),
        "target": _inline(DocumentKind.GROUPOID, h.target),
        "functions": _encode_functions(h),
    }


def _encode_embedding(e: GroupoidEmbedding) -> dict:
    return {
        "source": _inline(DocumentKind.GROUPOID, e.source),
        "target": _inline(DocumentKind.GROUPOID, e.target),
        "iota": dict(e.iota),
        "maps": {i: as_dict(t) for i, t in e.per_object.items()},
    }


def _encode_cover_morphism(c: CoverMorphism) -> dict:
    return {
        "source": _inline(DocumentKind.COVER, c.source),
        "target": _inline(DocumentKind.COVER, c.target),
        "map": as_dict(c.table),
    }


def _encode_family_morphism(fm: Union[GroupoidFamilyMorphism, CoverFamilyMorphism]) -> dict:
    if isinstance(fm, GroupoidFamilyMorphism):
        return {
            "side": "groupoid",
            "source": _inline(DocumentKind.FAMILY, fm.source),
            "target": _inline(DocumentKind.FAMILY, fm.target),
            "components": {a: _encode_functions(h) for a, h in fm.components.items()},
        }
    return {
        "side": "cover",
        "source": _inline(DocumentKind.FAMILY_COVER, fm.source),
        "target": _inline(DocumentKind.FAMILY_COVER, fm.target),
        "map": [
            {"src_fiber": p.fibre, "src": p.label, "dst_fiber": q.fibre, "dst": q.label}
            for p, q in sorted(fm.table)
        ],
    }


_ENCODERS: dict[DocumentKind, Callable[[Any], dict]] = {
    DocumentKind.GROUPOID: _encode_groupoid,
    DocumentKind.MORPHISM: _encode_morphism,
    DocumentKind.EMBEDDING: _encode_embedding,
    DocumentKind.COVER: _encode_cover,
    DocumentKind.COVER_MORPHISM: _encode_cover_morphism,
    DocumentKind.FAMILY: _encode_family,
    DocumentKind.FAMILY_COVER: _encode_family_cover,
    DocumentKind.FAMILY_MORPHISM: _encode_family_morphism,
    DocumentKind.RAW_STRUCTURE: _encode_raw,
}

_KIND_OF_TYPE: tuple[tuple[DocumentKind, type], ...] = (
    (DocumentKind.GROUPOID, FiniteGroupoid),
    (DocumentKind.MORPHISM, GroupoidMorphism),
    (DocumentKind.EMBEDDING, GroupoidEmbedding),
    (DocumentKind.COVER, ExtendedCover),
    (DocumentKind.COVER_MORPHISM, CoverMorphism),
    (DocumentKind.FAMILY, GroupoidFamily),
    (DocumentKind.FAMILY_COVER, FamilyCover),
    (DocumentKind.FAMILY_MORPHISM, GroupoidFamilyMorphism),
    (DocumentKind.FAMILY_MORPHISM, CoverFamilyMorphism),
)
