"""Exceções do recimap."""


class RecimapError(Exception):
    """Erro base do recimap."""


class FieldMismatchError(RecimapError, ValueError):
    """Escalares de extensões quadráticas distintas foram combinados."""


class ScalarParseError(RecimapError, ValueError):
    """Texto fora da gramática de escalares."""


class SupportError(RecimapError, ValueError):
    """Ponto ou conjunto fora do suporte de um mapa."""


class SuspensionError(RecimapError, ValueError):
    """Vetor ζ não define uma suspensão válida."""


class BranchCapExceeded(RecimapError, RuntimeError):
    """O refinamento por pontos de quebra excedeu o limite de ramos."""

    def __init__(self, cap: int, pieces: int):
        self.cap = cap
        self.pieces = pieces
        super().__init__(f"Limite de ramos excedido: {pieces} peças (limite {cap})")


class InvariantViolation(RecimapError, AssertionError):
    """Uma verificação exata de lema falhou (sinal de bug, nunca silenciado)."""


class ConfigError(RecimapError, ValueError):
    """Arquivo de sistema ilegível ou inválido."""
