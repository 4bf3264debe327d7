"""CLI principal do recimap."""

import logging
from enum import Enum
from pathlib import Path
from typing import Annotated, Optional

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from .analysis import analyze as run_analysis
from .config import AppConfig, SystemConfig, get_settings
from .exceptions import BranchCapExceeded, InvariantViolation
from .fixtures import emit_fixtures, list_fixtures
from .first_return import first_return
from .maharam import extend
from .render import render_composition, render_first_return, render_maharam, render_suspension, render_two_row

app = typer.Typer(
    name="recimap",
    help="recimap - laboratório exato para transformações recíprocas F = Φ∘T",
    no_args_is_help=True,
)
# Saída humana vai para stderr; stdout fica reservado para JSON e SVG
console = Console(stderr=True)
stdout_console = Console()

PERMUTATION_HELP = (
    "Permutação: permutation[i] é a posição do intervalo i na linha de imagens. "
    "Ex.: comprimentos [3/10, 1/2, 1/5] com permutation [2, 1, 0] dão "
    "T(A) = [7/10, 1), T(B) = [1/5, 7/10), T(C) = [0, 1/5)."
)


class FigureKind(str, Enum):
    """Figuras disponíveis."""

    MAP = "map"
    COMPOSITION = "composition"
    FIRST_RETURN = "first-return"
    SUSPENSION = "suspension"
    MAHARAM = "maharam"


def setup_logging(verbose: bool) -> None:
    """Configura o logging com RichHandler em stderr."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def load_settings(config_path: Optional[Path]) -> AppConfig:
    try:
        return get_settings(config_path=config_path).config
    except FileNotFoundError as e:
        console.print(f"[red]Erro:[/red] {e}")
        raise typer.Exit(1)
    except ValueError as e:
        console.print(f"[red]Erro de configuração:[/red] {e}")
        raise typer.Exit(1)


def load_system(system_path: Path) -> SystemConfig:
    try:
        return SystemConfig.load(system_path)
    except FileNotFoundError as e:
        console.print(f"[red]Erro:[/red] {e}")
        raise typer.Exit(1)
    except ValueError as e:
        console.print(f"[red]Erro no sistema:[/red] {e}")
        raise typer.Exit(1)


def write_output(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=False)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    console.print(f"[green]✓[/green] Gravado em {out}")


@app.command(
    epilog=(
        "Exemplos:\n\n"
        "  Análise:          recimap analyze fixtures/wandering.json\n\n"
        "  Para arquivo:     recimap analyze fixtures/identity.json --out report.json\n\n"
        "  Modo estrito:     recimap analyze fixtures/pair_rotation_sqrt2.json --strict\n\n"
        + PERMUTATION_HELP
    )
)
def analyze(
    system_path: Annotated[Path, typer.Argument(help="Arquivo JSON do sistema")],
    budget: Annotated[
        Optional[int],
        typer.Option("--budget", min=1, help="Máximo de aplicações de F por peça"),
    ] = None,
    orbit_steps: Annotated[
        Optional[int],
        typer.Option("--orbit-steps", min=0, help="Passos da órbita na extensão de Maharam"),
    ] = None,
    probes: Annotated[
        Optional[int],
        typer.Option("--probes", min=1, help="Número de sondas do conjunto de razões"),
    ] = None,
    out: Annotated[
        Optional[Path],
        typer.Option("--out", "-o", help="Arquivo de saída (padrão stdout)"),
    ] = None,
    strict: Annotated[
        bool,
        typer.Option("--strict", help="Sai com código 2 se algum veredicto for desconhecido"),
    ] = False,
    config_path: Annotated[
        Optional[Path],
        typer.Option("--config", "-c", help="Caminho do arquivo config.yaml"),
    ] = None,
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-v", help="Log detalhado"),
    ] = False,
) -> None:
    """Analisa um sistema e emite o relatório JSON."""
    setup_logging(verbose)
    settings = load_settings(config_path)
    system = load_system(system_path)

    try:
        report = run_analysis(system, settings, budget=budget, orbit_steps=orbit_steps, probes=probes)
    except InvariantViolation as e:
        console.print(f"[red]Violação de invariante:[/red] {e}")
        raise typer.Exit(3)
    except BranchCapExceeded as e:
        console.print(f"[red]Erro:[/red] {e}")
        raise typer.Exit(1)
    except ValueError as e:
        console.print(f"[red]Erro no sistema:[/red] {e}")
        raise typer.Exit(1)

    write_output(report.to_json(), out)

    table = Table(title=f"Análise de {system.name or system_path.name}")
    table.add_column("Etapa", style="cyan")
    table.add_column("Resultado")
    table.add_row("Tempos de retorno", ", ".join(f"{n}: {m}" for n, m in report.first_return["return_times"].items()))
    table.add_row("Conservatividade", report.conservativity["kind"])
    table.add_row("Ergodicidade", report.ergodicity["kind"])
    diagnostic = report.maharam["diagnostic"]
    table.add_row(
        "Maharam",
        "não ergódica" if diagnostic["claimed_non_ergodic"] else f"indefinida ({diagnostic['krieger']})",
    )
    console.print(table)

    if strict and report.has_unknown:
        console.print("[yellow]Veredicto desconhecido em modo estrito.[/yellow]")
        raise typer.Exit(2)


@app.command()
def render(
    system_path: Annotated[Path, typer.Argument(help="Arquivo JSON do sistema")],
    figure: Annotated[
        FigureKind,
        typer.Option("--figure", "-f", help="Figura a desenhar"),
    ] = FigureKind.MAP,
    out: Annotated[
        Optional[Path],
        typer.Option("--out", "-o", help="Arquivo SVG de saída (padrão stdout)"),
    ] = None,
    min_level: Annotated[int, typer.Option("--min-level", help="Menor nível (figura maharam)")] = -1,
    max_level: Annotated[int, typer.Option("--max-level", help="Maior nível (figura maharam)")] = 1,
    config_path: Annotated[
        Optional[Path],
        typer.Option("--config", "-c", help="Caminho do arquivo config.yaml"),
    ] = None,
) -> None:
    """Desenha uma figura SVG do sistema."""
    setup_logging(False)
    settings = load_settings(config_path)
    config = load_system(system_path)
    width, height = settings.render.width, settings.render.height

    try:
        system = config.to_system()
        if figure == FigureKind.MAP:
            svg = render_two_row(system.T, system.labels, title=system.name, width=width, height=height)
        elif figure == FigureKind.COMPOSITION:
            svg = render_composition(system, width=width, height=int(height * 1.5))
        elif figure == FigureKind.FIRST_RETURN:
            returns = first_return(system, settings.analysis.budget, settings.analysis.branch_cap)
            svg = render_first_return(returns, width=width, height=height)
        elif figure == FigureKind.SUSPENSION:
            svg = render_suspension(config.suspension_data(), system.labels, width=width, height=2 * height)
        else:
            svg = render_maharam(extend(system), range(min_level, max_level + 1), width=width)
    except InvariantViolation as e:
        console.print(f"[red]Violação de invariante:[/red] {e}")
        raise typer.Exit(3)
    except (ValueError, BranchCapExceeded) as e:
        console.print(f"[red]Erro:[/red] {e}")
        raise typer.Exit(1)

    write_output(svg, out)


@app.command()
def fixtures(
    list_only: Annotated[
        bool,
        typer.Option("--list", "-l", help="Lista os exemplos embutidos"),
    ] = False,
    emit: Annotated[
        Optional[Path],
        typer.Option("--emit", help="Grava os exemplos como JSON no diretório"),
    ] = None,
) -> None:
    """Lista ou grava os sistemas de exemplo."""
    if emit is None and not list_only:
        console.print("[red]Erro:[/red] Use --list ou --emit DIR")
        raise typer.Exit(1)

    if list_only:
        table = Table(title="Exemplos")
        table.add_column("Nome", style="cyan", no_wrap=True)
        table.add_column("Descrição")
        for name, description in list_fixtures():
            table.add_row(name, description)
        stdout_console.print(table)

    if emit is not None:
        try:
            written = emit_fixtures(emit)
        except OSError as e:
            console.print(f"[red]Erro:[/red] Não foi possível gravar em {emit}: {e}")
            raise typer.Exit(1)
        console.print(f"[green]✓[/green] {len(written)} exemplo(s) gravado(s) em {emit}")


if __name__ == "__main__":
    app()
