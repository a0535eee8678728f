"""Command-line interface for lotto-equilibria."""

import logging
import sys
from typing import Optional

import click
from rich.console import Console
from rich.markup import escape

from src.pipeline import LottoPipeline
from src.utils.config import EXPORT_FORMATS, METHODS, Config, RunConfig
from src.utils.errors import DomainError, LottoError, RegimeError, UsageError
from src.utils.logger import resolve_log_level, setup_logger

console = Console()

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def setup_logging(config: Config, verbose: bool = False) -> None:
    """Configure logging with Rich handler."""
    setup_logger("src", level=logging.INFO, console=console)
    level = resolve_log_level(config.log_level, verbose)
    if level != logging.INFO:
        setup_logger("src", level=level, console=console)


def load_config(settings: Optional[str]) -> Config:
    """Defaults, then the YAML settings file, then ``LOTTO_*`` variables."""
    config = Config.from_yaml(settings) if settings else Config()
    return Config.from_env(config)


def _fail(error: Exception, verbose: bool) -> None:
    console.print(f"[bold red]✗ Error:[/bold red] {escape(str(error))}")
    if verbose:
        console.print_exception()
    usage = isinstance(error, (UsageError, DomainError, RegimeError, OSError))
    sys.exit(EXIT_USAGE if usage else EXIT_FAILURE)


def _fmt(values) -> str:
    return ", ".join(f"{v:.6g}" for v in values)


@click.group()
@click.version_option(version="1.0.0", prog_name="lotto")
@click.option(
    "--settings",
    "-s",
    type=click.Path(exists=True, dir_okay=False),
    help="YAML file with solver, verifier and simulation defaults",
)
@click.pass_context
def cli(ctx: click.Context, settings: Optional[str]):
    """Lotto Equilibria - solve, verify and simulate General Lotto games."""
    ctx.ensure_object(dict)
    try:
        ctx.obj["config"] = load_config(settings)
    except LottoError as e:
        _fail(e, False)


@cli.command()
@click.option(
    "--config",
    "-c",
    "game_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Game JSON: budgets, threshold, grid_k",
)
@click.option(
    "--method",
    "-m",
    default="closed-form",
    type=click.Choice(list(METHODS)),
    help="Solver to use",
)
@click.option("--grid-k", type=int, help="Grid resolution for fictitious play")
@click.option("--eps", "target_eps", type=float, help="Target exploitability")
@click.option("--max-iters", type=int, help="Fictitious-play iteration cap")
@click.option("--out", "-o", "output", type=click.Path(), help="Output directory")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
@click.pass_context
def solve(
    ctx: click.Context,
    game_path: str,
    method: str,
    grid_k: Optional[int],
    target_eps: Optional[float],
    max_iters: Optional[int],
    output: Optional[str],
    verbose: bool,
):
    """Compute an equilibrium and write strategies, cdf table and report.

    Example:
        lotto solve --config game.json --method fictitious-play --grid-k 300 --out out/
    """
    config: Config = ctx.obj["config"]
    setup_logging(config, verbose)

    try:
        run = RunConfig.from_config(
            "solve",
            config,
            method=method,
            game_path=game_path,
            grid_k=grid_k,
            target_eps=target_eps,
            max_iters=max_iters,
            output=output,
        )
        console.print(f"[bold blue]Lotto Equilibria[/bold blue] - solving {escape(game_path)}")
        profile, report = LottoPipeline(config).run_solve(run)
    except Exception as e:
        _fail(e, verbose)
        return

    console.print(f"Regime: [bold]{profile.regime.value}[/bold]")
    console.print(f"L: {profile.L:.6g}")
    console.print(f"Exploitability: {report.exploitability:.3e}")
    if method == "fictitious-play":
        status = "[green]converged[/green]" if report.converged else "[yellow]not converged[/yellow]"
        console.print(f"Iterations: {report.iterations} ({status})")
    console.print(f"Expected bids: {_fmt(profile.expected_bids())}")
    if report.utilities:
        console.print(f"Utilities: {_fmt(report.utilities)} (sum {sum(report.utilities):.9f})")
    console.print(f"[bold green]✓ Artifacts saved to:[/bold green] {escape(run.output)}")


@cli.command()
@click.option("--profile", "-p", "profile_path", required=True, type=click.Path(exists=True))
@click.option("--game", "-g", "game_path", type=click.Path(exists=True), help="Game JSON")
@click.option("--k-audit", type=int, help="Audit grid resolution")
@click.option("--out", "-o", "output", type=click.Path(), help="Output directory")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
@click.pass_context
def verify(
    ctx: click.Context,
    profile_path: str,
    game_path: Optional[str],
    k_audit: Optional[int],
    output: Optional[str],
    verbose: bool,
):
    """Run every equilibrium check on a profile; exit 1 if any fails."""
    config: Config = ctx.obj["config"]
    setup_logging(config, verbose)

    try:
        run = RunConfig.from_config(
            "verify",
            config,
            profile_path=profile_path,
            game_path=game_path,
            k_audit=k_audit,
            output=output,
        )
        report = LottoPipeline(config).run_verify(run)
    except Exception as e:
        _fail(e, verbose)
        return

    for check in report.checks:
        if not check.applicable:
            mark = "[dim]-[/dim]"
        elif check.passed:
            mark = "[green]✓[/green]"
        else:
            mark = "[red]✗[/red]"
        console.print(
            f"{mark} {check.name}: residual {check.residual:.3e} "
            f"(tol {check.tolerance:.1e}) {escape(check.details)}"
        )

    if report.overall:
        console.print("[bold green]✓ All checks passed[/bold green]")
        return
    console.print(f"[bold red]✗ {len(report.failed())} check(s) failed[/bold red]")
    sys.exit(EXIT_FAILURE)


@cli.command()
@click.option("--profile", "-p", "profile_path", required=True, type=click.Path(exists=True))
@click.option("--game", "-g", "game_path", type=click.Path(exists=True), help="Game JSON")
@click.option("--samples", "-n", type=int, help="Number of rounds")
@click.option("--seed", type=int, help="Root seed")
@click.option("--out", "-o", "output", type=click.Path(), help="Output directory")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
@click.pass_context
def simulate(
    ctx: click.Context,
    profile_path: str,
    game_path: Optional[str],
    samples: Optional[int],
    seed: Optional[int],
    output: Optional[str],
    verbose: bool,
):
    """Play a profile by Monte Carlo and compare with exact utilities."""
    config: Config = ctx.obj["config"]
    setup_logging(config, verbose)

    try:
        run = RunConfig.from_config(
            "simulate",
            config,
            profile_path=profile_path,
            game_path=game_path,
            samples=samples,
            seed=seed,
            output=output,
        )
        result, exact = LottoPipeline(config).run_simulate(run)
    except Exception as e:
        _fail(e, verbose)
        return

    console.print(f"Samples: {result.samples} (seed {result.seed})")
    for i, (share, se, u) in enumerate(zip(result.win_share, result.win_share_se, exact)):
        console.print(
            f"  player {i}: win share {share:.4f} ± {se:.4f} (exact {u:.4f}), "
            f"mean bid {result.mean_bid[i]:.4f} ± {result.mean_bid_se[i]:.4f}"
        )
    console.print(f"Tie rate: {result.tie_rate:.4f}, share sum: {result.share_sum:.6f}")


@cli.command()
@click.option("--profile", "-p", "profile_path", required=True, type=click.Path(exists=True))
@click.option("--game", "-g", "game_path", type=click.Path(exists=True), help="Game JSON")
@click.option(
    "--format", "-f", "export_format", default="csv", type=click.Choice(list(EXPORT_FORMATS))
)
@click.option("--out", "-o", "output", type=click.Path(), help="Output directory")
@click.option("--verbose", "-v", is_flag=True, help="Enable verbose output")
@click.pass_context
def export(
    ctx: click.Context,
    profile_path: str,
    game_path: Optional[str],
    export_format: str,
    output: Optional[str],
    verbose: bool,
):
    """Convert a profile to the strategy CSV (plus cdf table) or to JSON."""
    config: Config = ctx.obj["config"]
    setup_logging(config, verbose)

    try:
        run = RunConfig.from_config(
            "export",
            config,
            profile_path=profile_path,
            game_path=game_path,
            export_format=export_format,
            output=output,
        )
        paths = LottoPipeline(config).run_export(run)
    except Exception as e:
        _fail(e, verbose)
        return

    for path in paths:
        console.print(f"[green]✓ Wrote:[/green] {escape(str(path))}")


def main():
    """Main entry point."""
    cli(obj={})


if __name__ == "__main__":
    main()
