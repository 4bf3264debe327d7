"""Carregamento e validação de configuração."""

import json
import os
import re
from pathlib import Path
from typing import Any, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from .exceptions import ConfigError, SuspensionError
from .numeric import Scalar, format_scalar, parse_scalar
from .render.suspension import SuspensionData
from .systems import IETSpec, ReciprocalSystem, make_reciprocal

# Padrão para variáveis de ambiente: ${VAR_NAME} ou ${VAR_NAME:-default}
ENV_VAR_PATTERN = re.compile(r"\$\{(\w+)(?::-(.*))?\}")

# Usado quando o config.yaml padrão não existe; passa pela mesma expansão
DEFAULT_CONFIG: dict[str, Any] = {
    "analysis": {"branch_cap": "${RECIMAP_BRANCH_CAP:-1000000}"},
    "maharam": {},
    "render": {},
}


def expand_env_vars(data: Any) -> Any:
    """Expande variáveis de ambiente recursivamente em dicionários e listas."""
    if isinstance(data, str):

        def replace_var(match):
            var_name, default_value = match.groups()
            return os.getenv(var_name, default_value or "")

        return ENV_VAR_PATTERN.sub(replace_var, data)
    elif isinstance(data, dict):
        return {k: expand_env_vars(v) for k, v in data.items()}
    elif isinstance(data, list):
        return [expand_env_vars(i) for i in data]
    return data


class AnalysisSettings(BaseModel):
    """Parâmetros do primeiro retorno e dos testes de ergodicidade."""

    budget: int = Field(default=64, ge=1)
    branch_cap: int = Field(default=1_000_000, ge=1)
    wandering_horizon: int = Field(default=20, ge=1)
    invariant_max_depth: int = Field(default=40, ge=1)
    invariant_piece_cap: int = Field(default=10_000, ge=1)
    power_bound: int = Field(default=4, ge=1)
    oracle_points: int = Field(default=1000, ge=0)


class MaharamSettings(BaseModel):
    """Parâmetros das simulações na extensão de Maharam."""

    orbit_steps: int = Field(default=10_000, ge=0)
    exact_orbit_cap: int = Field(default=10_000, ge=0)
    probes: int = Field(default=4, ge=1)
    probe_starts: int = Field(default=6, ge=1)
    ratio_steps: int = Field(default=400, ge=1)
    proximity: float = Field(default=1e-12, gt=0)
    mu_checks: int = Field(default=100, ge=0)
    krieger_k: int = Field(default=1, ge=1)
    seed: int = 0


class RenderSettings(BaseModel):
    """Dimensões das figuras SVG."""

    width: int = Field(default=700, ge=100)
    height: int = Field(default=200, ge=100)


class AppConfig(BaseModel):
    """Configuração principal da aplicação."""

    analysis: AnalysisSettings = Field(default_factory=AnalysisSettings)
    maharam: MaharamSettings = Field(default_factory=MaharamSettings)
    render: RenderSettings = Field(default_factory=RenderSettings)


class ZetaEntry(BaseModel):
    """Componente ζᵢ = re + i·im de um vetor de suspensão."""

    re: str
    im: str

    @field_validator("re", "im")
    @classmethod
    def validate_scalar(cls, v: str) -> str:
        parse_scalar(v)
        return v


class SystemConfig(BaseModel):
    """Descrição JSON de um sistema recíproco.

    `permutation[i]` é a posição do intervalo i na linha de imagens: para
    comprimentos (3/10, 1/2, 1/5) e permutation [2, 1, 0], T(A) = [7/10, 1).
    """

    name: str = ""
    field_d: int = Field(default=0, ge=0)
    lengths: list[str]
    permutation: list[int]
    involution_s: str
    labels: Optional[list[str]] = None
    zeta: Optional[list[ZetaEntry]] = None

    @field_validator("lengths")
    @classmethod
    def validate_lengths(cls, v: list[str]) -> list[str]:
        """Valida que todos os comprimentos seguem a gramática de escalares."""
        for text in v:
            parse_scalar(text)
        return v

    @field_validator("involution_s")
    @classmethod
    def validate_s(cls, v: str) -> str:
        if not parse_scalar(v).is_rational:
            raise ValueError(f"involution_s deve ser racional: {v!r}")
        return v

    @model_validator(mode="after")
    def validate_field(self) -> "SystemConfig":
        """Valida que todos os escalares vivem em ℚ(√field_d)."""
        texts = [*self.lengths, self.involution_s]
        for entry in self.zeta or ():
            texts.extend((entry.re, entry.im))
        for text in texts:
            d = parse_scalar(text).d
            if d not in (0, self.field_d):
                raise ValueError(f"Escalar {text!r} fora do corpo Q(sqrt({self.field_d}))")
        return self

    @property
    def iet(self) -> IETSpec:
        return IETSpec(tuple(parse_scalar(t) for t in self.lengths), tuple(self.permutation))

    def to_system(self) -> ReciprocalSystem:
        """Constrói o sistema recíproco descrito."""
        return make_reciprocal(self.iet, parse_scalar(self.involution_s), name=self.name, labels=self.labels)

    def suspension_data(self) -> SuspensionData:
        """Dados de suspensão do bloco `zeta`.

        Raises:
            SuspensionError: Se o sistema não tiver bloco zeta
        """
        if not self.zeta:
            raise SuspensionError(f"Sistema {self.name or '?'} não possui bloco zeta")
        zeta = tuple((parse_scalar(entry.re), parse_scalar(entry.im)) for entry in self.zeta)
        return SuspensionData(self.iet, zeta)

    @classmethod
    def from_system(
        cls,
        system: ReciprocalSystem,
        zeta: Optional[list[tuple[Scalar, Scalar]]] = None,
    ) -> "SystemConfig":
        return cls(
            name=system.name,
            field_d=system.field_d,
            lengths=[format_scalar(length) for length in system.iet.lengths],
            permutation=list(system.iet.permutation),
            involution_s=format_scalar(system.s),
            labels=list(system.labels),
            zeta=[ZetaEntry(re=format_scalar(re), im=format_scalar(im)) for re, im in zeta] if zeta else None,
        )

    @classmethod
    def load(cls, path: Path) -> "SystemConfig":
        """Lê e valida um arquivo JSON de sistema.

        Raises:
            FileNotFoundError: Se o arquivo não existir
            ConfigError: Se o JSON for malformado (com linha e coluna) ou inválido
        """
        if not path.exists():
            raise FileNotFoundError(f"Arquivo de sistema não encontrado: {path}")
        text = path.read_text(encoding="utf-8")
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"{path}: {e}") from None

    def to_json(self) -> str:
        return json.dumps(self.model_dump(exclude_none=True), indent=2, ensure_ascii=False) + "\n"


class Settings:
    """Gerenciador de configurações e variáveis de ambiente."""

    def __init__(self, config_path: Optional[Path] = None, env_path: Optional[Path] = None):
        """Inicializa as configurações.

        Args:
            config_path: Caminho para o arquivo config.yaml
            env_path: Caminho para o arquivo .env
        """
        self._explicit = config_path is not None
        self._config_path = config_path or Path("config.yaml")
        self._env_path = env_path or Path(".env")
        self._config: Optional[AppConfig] = None

        if self._env_path.exists():
            load_dotenv(self._env_path)

    @property
    def config(self) -> AppConfig:
        """Retorna a configuração carregada do YAML."""
        if self._config is None:
            self._config = self._load_config()
        return self._config

    def _load_config(self) -> AppConfig:
        """Carrega e valida o arquivo config.yaml (ou os padrões embutidos)."""
        if self._config_path.exists():
            with open(self._config_path, encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        elif self._explicit:
            raise FileNotFoundError(f"Arquivo de configuração não encontrado: {self._config_path}")
        else:
            data = DEFAULT_CONFIG

        # Expande variáveis de ambiente antes da validação pelo Pydantic
        data = expand_env_vars(data)

        return AppConfig.model_validate(data)

    def reload(self) -> None:
        """Recarrega as configurações."""
        self._config = None
        if self._env_path.exists():
            load_dotenv(self._env_path, override=True)


# Instância global de configurações
_settings: Optional[Settings] = None


def get_settings(config_path: Optional[Path] = None, env_path: Optional[Path] = None) -> Settings:
    """Retorna a instância de configurações.

    Args:
        config_path: Caminho para o arquivo config.yaml
        env_path: Caminho para o arquivo .env

    Returns:
        Instância de Settings
    """
    global _settings
    if _settings is None or config_path is not None or env_path is not None:
        _settings = Settings(config_path, env_path)
    return _settings
