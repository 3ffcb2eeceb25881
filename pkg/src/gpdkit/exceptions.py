"""
Exceções customizadas do gpdkit.

Cada classe carrega o código de saída que a CLI usa quando a exceção
escapa de um comando (0 sucesso, 1 falha verificada, 2 erro estrutural
ou de uso, 3 limite de oráculo excedido).
"""

from typing import TYPE_CHECKING, Iterable, Optional

if TYPE_CHECKING:
    from gpdkit.models import ValidationReport, Violation


class GpdkitError(Exception):
    """Exceção base para todos os erros do gpdkit."""

    exit_code: int = 2

    def __init__(self, message: str, subjects: Optional[Iterable[str]] = None):
        self.message = message
        self.subjects = tuple(subjects or ())
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.subjects:
            return f"{self.message} [{', '.join(self.subjects)}]"
        return self.message


class StructuralError(GpdkitError):
    """Estrutura malformada: identificador não resolvido, tabela não total, etc."""

    exit_code = 2


class UsageError(GpdkitError):
    """Comando ou argumento de linha de comando inválido."""

    exit_code = 2


class DocumentSyntaxError(GpdkitError):
    """Documento que não é JSON válido."""

    exit_code = 2

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"{self.message} (linha {self.line}, coluna {self.column})"


class VersionError(GpdkitError):
    """format_version ausente ou não suportado."""

    exit_code = 2


class PreconditionError(GpdkitError):
    """Pré-condição de uma operação violada (ex: grupoide desconexo)."""

    exit_code = 1


class FamilyError(PreconditionError):
    """Incompatibilidade de famílias: base diferente, tabela que cruza fibras, seção errada."""


class MorphismError(GpdkitError):
    """Nenhum morfismo contém a semente dada (saturação viola a condição (A))."""

    exit_code = 1

    def __init__(self, message: str, violation: Optional["Violation"] = None):
        super().__init__(message, violation.subjects if violation else None)
        self.violation = violation


class InvariantError(GpdkitError):
    """Uma auto-verificação do motor falhou."""

    exit_code = 1


class SemanticError(GpdkitError):
    """Valor bem formado (documento ou argumento) que não passa no validador do seu tipo."""

    exit_code = 1

    def __init__(self, message: str, report: "ValidationReport"):
        first = report.violations[0] if report.violations else None
        super().__init__(message, first.subjects if first else None)
        self.report = report
        self.invariant = first.invariant if first else ""

    def __str__(self) -> str:
        if self.invariant:
            return f"{self.message}: {self.invariant} [{', '.join(self.subjects)}]"
        return self.message


class BoundExceededError(GpdkitError):
    """Espaço de busca do oráculo acima do limite configurado."""

    exit_code = 3

    def __init__(self, message: str, size: int = 0, bound: int = 0):
        super().__init__(message)
        self.size = size
        self.bound = bound

    def __str__(self) -> str:
        if self.bound:
            return f"{self.message} ({self.size} > {self.bound})"
        return self.message
