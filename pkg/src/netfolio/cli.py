"""Command-line client for the allocation service.

The CLI builds the same request models the HTTP API accepts and, by
default, executes them in-process; pass --server to send them to a
running service instead. Either way the response's artifact files are
written to --out-dir together with a config echo, so a run is
reproducible from its config file alone. Every flag can also be set
through an environment variable with the NETFOLIO_ prefix.
"""
from __future__ import annotations

import logging
import sys
from datetime import date
from pathlib import Path

import click
import httpx
import pydantic

from .errors import NetfolioError
from .reporting import fmt, render_json
from .service import handlers, schemas

logger = logging.getLogger(__name__)

STRATEGY_CHOICES = ("gmv", "pna", "kna", "tna", "ew")


def _parse_strategies(text: str) -> list[str]:
    names = [s.strip().lower() for s in text.split(",") if s.strip()]
    for name in names:
        if name not in STRATEGY_CHOICES:
            raise click.BadParameter(
                f"unknown strategy {name!r}; choose from {', '.join(STRATEGY_CHOICES)}",
                param_hint="--strategies",
            )
    return names


def _read_input(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise click.ClickException(f"cannot read input file {path}: {exc}") from exc


def _post(server: str, route: str, request: pydantic.BaseModel, response_model):
    url = server.rstrip("/") + route
    try:
        reply = httpx.post(url, json=request.model_dump(mode="json"), timeout=600.0)
    except httpx.HTTPError as exc:
        raise click.ClickException(f"request to {url} failed: {exc}") from exc
    if reply.status_code != 200:
        try:
            detail = reply.json().get("detail", reply.text)
        except ValueError:
            detail = reply.text
        raise click.ClickException(f"{url} returned {reply.status_code}: {detail}")
    return response_model.model_validate(reply.json())


def _dispatch(server: str | None, route: str, request, handler, response_model):
    if server:
        return _post(server, route, request, response_model)
    try:
        return handler(request)
    except NetfolioError as exc:
        raise click.ClickException(str(exc)) from exc


def _write_artifacts(out_dir: str, files: dict[str, str], config: dict) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.json").write_text(render_json(config), encoding="utf-8")
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")


def _options_model(strategies, in_sample_months, step_months, tail_q, grid_size,
                   epsilon, risk_free, annualization) -> schemas.RunOptionsModel:
    try:
        return schemas.RunOptionsModel(
            strategies=_parse_strategies(strategies),
            in_sample_months=in_sample_months,
            step_months=step_months,
            tail_q=tail_q,
            grid_size=grid_size,
            epsilon=epsilon,
            risk_free=risk_free,
            annualization=annualization,
        )
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or "options"
        raise click.ClickException(f"invalid {field}: {first['msg']}") from exc


def panel_options(fn):
    fn = click.option("--input", "input_path", required=True, envvar="NETFOLIO_INPUT",
                      help="Delimited text file: header 'date,<asset>,...'.")(fn)
    fn = click.option("--mode", type=click.Choice(["prices", "returns"]),
                      default="returns", envvar="NETFOLIO_MODE", show_default=True)(fn)
    fn = click.option("--delimiter", default=",", envvar="NETFOLIO_DELIMITER",
                      show_default=True)(fn)
    return fn


def run_options(fn):
    fn = click.option("--strategies", default="gmv,pna,kna,tna,ew",
                      envvar="NETFOLIO_STRATEGIES", show_default=True,
                      help="Comma-separated subset of gmv,pna,kna,tna,ew.")(fn)
    fn = click.option("--in-sample-months", type=int, default=24,
                      envvar="NETFOLIO_IN_SAMPLE_MONTHS", show_default=True)(fn)
    fn = click.option("--step-months", type=int, default=1,
                      envvar="NETFOLIO_STEP_MONTHS", show_default=True)(fn)
    fn = click.option("--tail-q", type=float, default=0.05,
                      envvar="NETFOLIO_TAIL_Q", show_default=True,
                      help="Quantile level of the lower-tail estimator.")(fn)
    fn = click.option("--grid-size", type=int, default=201,
                      envvar="NETFOLIO_GRID_SIZE", show_default=True,
                      help="Threshold grid points for integrated clustering.")(fn)
    fn = click.option("--epsilon", type=float, default=0.0,
                      envvar="NETFOLIO_EPSILON", show_default=True,
                      help="Omega-ratio threshold.")(fn)
    fn = click.option("--risk-free", type=float, default=0.0,
                      envvar="NETFOLIO_RISK_FREE", show_default=True,
                      help="Daily risk-free rate for the Sharpe ratio.")(fn)
    fn = click.option("--annualization", type=float, default=252.0,
                      envvar="NETFOLIO_ANNUALIZATION", show_default=True)(fn)
    return fn


def common_options(fn):
    fn = click.option("--out-dir", required=True, envvar="NETFOLIO_OUT_DIR",
                      help="Directory for the artifact files.")(fn)
    fn = click.option("--server", default=None, envvar="NETFOLIO_SERVER",
                      help="Base URL of a running service; default runs in-process.")(fn)
    return fn


@click.group()
def main():
    """Network-based portfolio selection toolkit."""
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


@main.command()
@panel_options
@run_options
@common_options
def backtest(input_path, mode, delimiter, strategies, in_sample_months, step_months,
             tail_q, grid_size, epsilon, risk_free, annualization, out_dir, server):
    """Run the rolling-window backtest and write reports and plot data."""
    request = schemas.BacktestRequest(
        panel=schemas.PanelPayload(csv_text=_read_input(input_path), mode=mode,
                                   delimiter=delimiter),
        options=_options_model(strategies, in_sample_months, step_months, tail_q,
                               grid_size, epsilon, risk_free, annualization),
    )
    response = _dispatch(server, "/backtest", request,
                         handlers.handle_backtest, schemas.BacktestResponse)
    config = {"command": "backtest", "input": input_path, "out_dir": out_dir,
              **response.config}
    _write_artifacts(out_dir, response.files, config)

    click.echo(f"{response.n_assets} assets, {response.n_windows} windows, "
               f"strategies: {', '.join(response.resolved_strategies)}")
    header = ("strategy", "mean_annual", "stdev_annual", "sharpe", "omega",
              "information_ratio")
    click.echo("  ".join(header))
    for row in response.summary:
        click.echo("  ".join([
            row.strategy,
            fmt(row.mean_annual), fmt(row.stdev_annual),
            fmt(row.sharpe), fmt(row.omega), fmt(row.information_ratio),
        ]))
    click.echo(f"artifacts written to {out_dir}")


@main.command()
@panel_options
@run_options
@click.option("--window", type=int, required=True, envvar="NETFOLIO_WINDOW",
              help="Window index into the rolling plan.")
@common_options
def snapshot(input_path, mode, delimiter, strategies, in_sample_months, step_months,
             tail_q, grid_size, epsilon, risk_free, annualization, window,
             out_dir, server):
    """Write node/edge tables for one window's dependence network."""
    request = schemas.SnapshotRequest(
        panel=schemas.PanelPayload(csv_text=_read_input(input_path), mode=mode,
                                   delimiter=delimiter),
        options=_options_model(strategies, in_sample_months, step_months, tail_q,
                               grid_size, epsilon, risk_free, annualization),
        window=window,
    )
    response = _dispatch(server, "/snapshot", request,
                         handlers.handle_snapshot, schemas.SnapshotResponse)
    config = {"command": "snapshot", "input": input_path, "out_dir": out_dir,
              **response.config}
    _write_artifacts(out_dir, response.files, config)
    click.echo(f"window {response.window} ({response.kind}): "
               f"{response.n_nodes} nodes, {response.n_edges} edges")
    click.echo(f"artifacts written to {out_dir}")


@main.command()
@click.option("--block-size", type=int, default=5, envvar="NETFOLIO_BLOCK_SIZE",
              show_default=True, help="Assets in the correlated block.")
@click.option("--block-rho", type=float, default=0.9, envvar="NETFOLIO_BLOCK_RHO",
              show_default=True, help="Pairwise correlation inside the block.")
@click.option("--n-independent", type=int, default=5, envvar="NETFOLIO_N_INDEPENDENT",
              show_default=True, help="Independent periphery assets.")
@click.option("--months", type=int, default=None, envvar="NETFOLIO_MONTHS",
              help="Calendar months of weekdays to generate.")
@click.option("--days", type=int, default=None, envvar="NETFOLIO_DAYS",
              help="Exact number of weekday observations to generate.")
@click.option("--start", type=click.DateTime(formats=["%Y-%m-%d"]),
              default="2020-01-01", envvar="NETFOLIO_START", show_default=True)
@click.option("--daily-vol", type=float, default=0.01, envvar="NETFOLIO_DAILY_VOL",
              show_default=True)
@click.option("--seed", type=int, default=0, envvar="NETFOLIO_SEED", show_default=True)
@common_options
def synthetic(block_size, block_rho, n_independent, months, days, start, daily_vol,
              seed, out_dir, server):
    """Generate a seeded block-correlated panel file for experiments."""
    try:
        request = schemas.SyntheticRequest(
            block_size=block_size, block_rho=block_rho, n_independent=n_independent,
            months=months, days=days,
            start=start.date() if not isinstance(start, date) else start,
            daily_vol=daily_vol, seed=seed,
        )
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        field = ".".join(str(p) for p in first["loc"]) or "request"
        raise click.ClickException(f"invalid {field}: {first['msg']}") from exc
    response = _dispatch(server, "/synthetic", request,
                         handlers.handle_synthetic, schemas.SyntheticResponse)
    config = {"command": "synthetic", "out_dir": out_dir, **response.config}
    _write_artifacts(out_dir, response.files, config)
    click.echo(f"panel with {response.n_assets} assets x {response.n_obs} days "
               f"written to {out_dir}")


if __name__ == "__main__":
    main()
