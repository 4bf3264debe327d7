"""Sistemas de exemplo embutidos."""

from pathlib import Path

from .config import SystemConfig, ZetaEntry

FIXTURES: dict[str, tuple[str, SystemConfig]] = {
    "scaling_third": (
        "T = id e involução de escala com s = 1/3 (ρ = 2)",
        SystemConfig(name="scaling_third", lengths=["1"], permutation=[0], involution_s="1/3"),
    ),
    "identity": (
        "T = id com s = 1/4: F = Φ e F_S = id",
        SystemConfig(name="identity", lengths=["1"], permutation=[0], involution_s="1/4"),
    ),
    "pair_rotation": (
        "Rotação por pares com comprimentos decimais lidos da figura",
        SystemConfig(
            name="pair_rotation",
            lengths=["121/500", "91/1000", "187/500", "293/1000"],
            permutation=[1, 0, 3, 2],
            involution_s="333/1000",
        ),
    ),
    "pair_rotation_sqrt2": (
        "Rotação por pares em Q(√2) com número de rotação irracional",
        SystemConfig(
            name="pair_rotation_sqrt2",
            field_d=2,
            lengths=["7/12-1/4*sqrt(2)", "-1/4+1/4*sqrt(2)", "5/12", "1/4"],
            permutation=[1, 0, 3, 2],
            involution_s="1/3",
        ),
    ),
    "wandering": (
        "F_S com intervalo errante [1/9, 2/9)",
        SystemConfig(
            name="wandering",
            lengths=["1/9", "2/9", "4/9", "2/9"],
            permutation=[1, 3, 2, 0],
            involution_s="1/3",
        ),
    ),
    "nonsurjective": (
        "F_S não sobrejetivo: [0, 1/12) fica fora da imagem",
        SystemConfig(
            name="nonsurjective",
            lengths=["1/6", "1/6", "1/6", "1/2"],
            permutation=[1, 3, 0, 2],
            involution_s="1/3",
        ),
    ),
    "figure1": (
        "IET de três intervalos com ordem invertida e vetor de suspensão",
        SystemConfig(
            name="figure1",
            lengths=["3/10", "1/2", "1/5"],
            permutation=[2, 1, 0],
            involution_s="1/3",
            zeta=[
                ZetaEntry(re="3/10", im="1"),
                ZetaEntry(re="1/2", im="1/5"),
                ZetaEntry(re="1/5", im="-1"),
            ],
        ),
    ),
}


def list_fixtures() -> list[tuple[str, str]]:
    """Retorna pares (nome, descrição) em ordem de cadastro."""
    return [(name, description) for name, (description, _) in FIXTURES.items()]


def get_fixture(name: str) -> SystemConfig:
    """Retorna a configuração de um exemplo embutido.

    Raises:
        ValueError: Se o nome não existir
    """
    if name not in FIXTURES:
        raise ValueError(f"Exemplo desconhecido: {name}. Disponíveis: {', '.join(FIXTURES)}")
    return FIXTURES[name][1]


def emit_fixtures(directory: Path) -> list[Path]:
    """Grava cada exemplo como `<nome>.json` em `directory`.

    Raises:
        OSError: Se o diretório não puder ser criado ou escrito
    """
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, (_, config) in FIXTURES.items():
        path = directory / f"{name}.json"
        path.write_text(config.to_json(), encoding="utf-8")
        written.append(path)
    return written
