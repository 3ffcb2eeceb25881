"""
Tabelas de funções finitas (uso interno).

Uma tabela é a forma canônica de uma função total entre dois carriers:
a tupla de pares (origem, imagem) ordenada pelo rótulo de origem.
É imutável e hashable, então pode ser guardada em frozensets.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

Table = tuple[tuple[str, str], ...]


def make_table(mapping: Mapping[str, str] | Iterable[tuple[str, str]]) -> Table:
    """Normaliza um dicionário (ou pares) em tabela canônica."""
    pairs = mapping.items() if isinstance(mapping, Mapping) else mapping
    return tuple(sorted((str(a), str(b)) for a, b in pairs))


def as_dict(table: Table) -> dict[str, str]:
    return dict(table)


def identity_table(carrier: Iterable[str]) -> Table:
    return make_table((a, a) for a in carrier)


def constant_table(carrier: Iterable[str], value: str) -> Table:
    return make_table((a, value) for a in carrier)


def compose(second: Table, first: Table) -> Table:
    """second ∘ first: aplica first e depois second."""
    lookup = dict(second)
    return tuple((a, lookup[b]) for a, b in first)


def compose_all(*tables: Table) -> Table:
    """Composição da direita para a esquerda: compose_all(c, b, a) = c∘b∘a."""
    result = tables[-1]
    for table in reversed(tables[:-1]):
        result = compose(table, result)
    return result


def invert(table: Table) -> Table:
    """Inversa de uma tabela bijetiva."""
    return make_table((b, a) for a, b in table)


def domain(table: Table) -> tuple[str, ...]:
    return tuple(a for a, _ in table)


def image(table: Table) -> frozenset[str]:
    return frozenset(b for _, b in table)


def is_injective(table: Table) -> bool:
    return len(image(table)) == len(table)


def is_bijection(table: Table, codomain: Iterable[str]) -> bool:
    """Bijeção sobre o codomínio dado (injetiva e sobrejetiva)."""
    return is_injective(table) and image(table) == frozenset(codomain)


def is_total(table: Table, carrier: Iterable[str], codomain: Iterable[str]) -> bool:
    """Tabela definida exatamente em carrier, com valores em codomain."""
    sources = domain(table)
    return (
        len(sources) == len(set(sources))
        and set(sources) == set(carrier)
        and image(table) <= frozenset(codomain)
    )


def images_in_order(table: Table, order: Sequence[str]) -> tuple[str, ...]:
    """Sequência de imagens na ordem declarada do carrier de origem."""
    lookup = dict(table)
    return tuple(lookup[a] for a in order)


def values_on(table: Table, points: Sequence[str]) -> tuple[str, ...]:
    lookup = dict(table)
    return tuple(lookup[a] for a in points)


def preimages_of(table: Table, points: Sequence[str]) -> tuple[tuple[str, ...], ...]:
    """Pré-imagens (ordenadas) de cada ponto; funciona também para tabelas não bijetivas."""
    return tuple(tuple(sorted(a for a, b in table if b == p)) for p in points)
