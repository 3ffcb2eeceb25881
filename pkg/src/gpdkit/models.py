"""
Modelos de relatório do gpdkit.

Validadores devolvem ValidationReport em vez de lançar exceções; os
oráculos de leis devolvem EquivalenceReport; o censo de internalidade
devolve CensusReport. Todos serializam com to_dict() para a CLI.
"""

from dataclasses import dataclass, field
from typing import Any, Iterable, Optional

from gpdkit.exceptions import SemanticError

# =============================================================================
# VALIDAÇÃO
# =============================================================================


@dataclass(frozen=True, slots=True)
class Violation:
    """Uma violação de invariante, com os identificadores envolvidos."""

    invariant: str
    """Nome curto do invariante (ex: 'identity', 'closure-composition', 'condition-A')"""

    message: str
    """Descrição legível"""

    subjects: tuple[str, ...] = ()
    """Identificadores ofensores (objetos, morfismos, índices)"""

    def to_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "message": self.message,
            "subjects": list(self.subjects),
        }

    def __repr__(self) -> str:
        return f"Violation({self.invariant}: {self.message})"


@dataclass(frozen=True)
class ValidationReport:
    """Resultado de um validador: ok ou lista de violações.

    Example:
        >>> report = validate_groupoid(g)
        >>> if not report.ok:
        ...     for v in report.violations:
        ...         print(v.invariant, v.subjects)
    """

    subject: str
    """Tipo do valor validado (groupoid, morphism, cover, ...)"""

    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def invariants(self) -> set[str]:
        """Conjunto dos nomes de invariantes violados."""
        return {v.invariant for v in self.violations}

    def raise_if_invalid(self, message: Optional[str] = None) -> "ValidationReport":
        """Lança SemanticError se houver violações."""
        if self.violations:
            raise SemanticError(message or f"{self.subject} inválido", self)
        return self

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
        }

    def __repr__(self) -> str:
        return f"ValidationReport({self.subject}, ok={self.ok}, violations={len(self.violations)})"


class ReportBuilder:
    """Acumulador de violações usado internamente pelos validadores."""

    __slots__ = ("subject", "_violations")

    def __init__(self, subject: str):
        self.subject = subject
        self._violations: list[Violation] = []

    def add(self, invariant: str, message: str, subjects: Iterable[str] = ()) -> None:
        self._violations.append(Violation(invariant, message, tuple(subjects)))

    def extend(self, report: ValidationReport) -> None:
        self._violations.extend(report.violations)

    @property
    def ok(self) -> bool:
        return not self._violations

    def build(self) -> ValidationReport:
        return ValidationReport(self.subject, tuple(self._violations))


# =============================================================================
# LEIS DA EQUIVALÊNCIA
# =============================================================================


@dataclass(frozen=True, slots=True)
class LawCheck:
    """Uma lei verificada; falhas carregam um contraexemplo concreto."""

    law: str
    passed: bool
    counterexample: Optional[dict[str, Any]] = None
    checked: int = 0
    """Quantidade de instâncias verificadas"""

    def to_dict(self) -> dict:
        return {
            "law": self.law,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


@dataclass
class EquivalenceReport:
    """Relatório de check_equivalence_laws."""

    subject: list[str] = field(default_factory=list)
    """Nomes dos grupoides do corpus"""

    checks: list[LawCheck] = field(default_factory=list)

    complete: bool = True
    """False quando algum par excedeu o limite do oráculo"""

    skipped: list[str] = field(default_factory=list)
    """Pares pulados por limite excedido"""

    @property
    def ok(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list[LawCheck]:
        return [check for check in self.checks if not check.passed]

    def law(self, name: str) -> LawCheck:
        for check in self.checks:
            if check.law == name:
                return check
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "subject": list(self.subject),
            "ok": self.ok,
            "complete": self.complete,
            "skipped": sorted(self.skipped),
            "checks": [check.to_dict() for check in sorted(self.checks, key=lambda c: c.law)],
        }


# =============================================================================
# CENSO DE INTERNALIDADE
# =============================================================================


@dataclass(frozen=True)
class CensusReport:
    """Fibras com grupo de automorfismos da estrela não trivial."""

    flagged: tuple[str, ...]
    """Identificadores de base sinalizados, em ordem"""

    orders: dict[str, int]
    """Ordem de Aut(estrela) por fibra"""

    total: int
    """Número total de fibras"""

    @property
    def count(self) -> int:
        return len(self.flagged)

    def to_dict(self) -> dict:
        return {
            "flagged": sorted(self.flagged),
            "count": self.count,
            "total": self.total,
            "orders": dict(sorted(self.orders.items())),
        }
