"""
Configurações do gpdkit.
"""

import os
import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional


class OutputFormat(str, Enum):
    """Formatos de relatório aceitos pela CLI.

    - TEXT: resumo legível para humanos (padrão).
    - JSON: relatório estruturado canônico (chaves ordenadas, com format_version).
    """
    TEXT = "text"
    JSON = "json"


# Versão do formato de arquivo e dos relatórios JSON
FORMAT_VERSION = 1

# Identificadores (objetos, morfismos, rótulos, base) são restritos a este charset
IDENTIFIER_RE = re.compile(r"^[A-Za-z0-9_]+$")

# Nome preferido do objeto estrela adjunto por extend_groupoid
STAR_OBJECT = "star"

# Prefixo dos identificadores de fibra criados por family_from_components
FIBRE_PREFIX = "a"


@dataclass(frozen=True)
class OracleBounds:
    """Limites dos oráculos exaustivos.

    Os oráculos existem para testes, não para caminhos de produção:
    acima destes limites a busca é recusada com BoundExceededError,
    nunca truncada em silêncio.
    """

    # Soma dos tamanhos de todos os carriers envolvidos
    max_carrier_total: int = 16

    # Maior Hom-set admitido em enumerate_morphisms
    max_hom_size: int = 24

    # Quantidade de funções candidatas (|C2|^|C1| somado sobre pares)
    max_function_candidates: int = 65536

    # Quantidade de tabelas S1 -> S2 em enumerate_cover_morphisms
    max_star_tables: int = 65536

    # Produto dos |S_a|! em independence_check
    max_automorphism_candidates: int = 40320

    def with_bound(self, bound: Optional[int]) -> "OracleBounds":
        """Retorna uma cópia com max_carrier_total substituído (CLI --bound)."""
        if bound is None:
            return self
        return replace(self, max_carrier_total=bound)

    @classmethod
    def from_env(cls) -> "OracleBounds":
        """Lê GPDKIT_BOUND do ambiente, se definido."""
        raw = os.environ.get("GPDKIT_BOUND")
        if raw and raw.isdigit():
            return cls(max_carrier_total=int(raw))
        return cls()


DEFAULT_BOUNDS = OracleBounds()
