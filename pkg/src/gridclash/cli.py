"""Command-line client of the gridclash service.

Every subcommand talks HTTP: against a remote server when ``--url`` is
given, otherwise against an in-process instance of the app, so single-box
usage needs no separate server. Long-running work (leagues, profiles,
tuning) goes through the job endpoints and is polled until done; output
files are written by the service process.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import yaml


class ServiceClient:
    """Tiny JSON-over-HTTP helper; in-process ASGI unless a URL is given."""

    def __init__(self, url: str | None = None):
        if url:
            import httpx

            self._client = httpx.Client(base_url=url, timeout=None)
        else:
            from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)

    def request(self, method: str, path: str, payload: dict | None = None) -> dict:
        response = self._client.request(method, path, json=payload)
        if response.status_code >= 400:
            try:
                detail = response.json().get("detail", response.text)
            except Exception:
                detail = response.text
            raise SystemExit(f"error: {detail}")
        return response.json()

    def get(self, path: str) -> dict:
        return self.request("GET", path)

    def post(self, path: str, payload: dict) -> dict:
        return self.request("POST", path, payload)


def parse_agent_token(token: str) -> dict:
    """An agent argument: builtin kind (`prhea`), aliased kind
    (`random:rand-b`), or a JSON/YAML config-block file."""
    path = Path(token)
    if path.suffix in (".json", ".yaml", ".yml") and path.exists():
        text = path.read_text()
        block = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
        if not isinstance(block, dict) or "agent" not in block:
            raise SystemExit(f"error: {token} is not an agent config block")
        return block
    kind, _, alias = token.partition(":")
    block = {"agent": kind}
    if alias:
        block["name"] = alias
    return block


def wait_for_job(client: ServiceClient, job: dict, quiet: bool = False) -> dict:
    job_id = job["job_id"]
    last = ""
    while job["state"] in ("queued", "running"):
        time.sleep(0.3)
        job = client.get(f"/jobs/{job_id}")
        line = f"[{job['kind']}] {job['progress'] * 100:5.1f}% {job['message']}"
        if not quiet and line != last:
            print(line, file=sys.stderr)
            last = line
    if job["state"] == "error":
        raise SystemExit(f"job failed: {job['message']}")
    return job


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("gridclash.service.app:app", host=args.host, port=args.port)
    return 0


def cmd_modes(args) -> int:
    client = ServiceClient(args.url)
    for name in client.get("/modes")["modes"]:
        print(name)
    return 0


def cmd_validate(args) -> int:
    client = ServiceClient(args.url)
    text = Path(args.config).read_text()
    result = client.post("/modes/validate", {"text": text})
    if result["ok"]:
        print(f"ok: {args.config} is a valid mode ({result['mode']})")
        return 0
    print(f"invalid: {result['error']}")
    return 1


def cmd_play(args) -> int:
    client = ServiceClient(args.url)
    record = client.post(
        "/matches",
        {
            "mode": args.mode,
            "agent0": parse_agent_token(args.agents[0]),
            "agent1": parse_agent_token(args.agents[1]),
            "seed": args.seed,
            "swapped": args.swapped,
            "budget": args.budget,
        },
    )
    print(json.dumps(record, indent=2))
    return 0


def cmd_league(args) -> int:
    client = ServiceClient(args.url)
    job = client.post(
        "/jobs/league",
        {
            "mode": args.mode,
            "agents": [parse_agent_token(t) for t in args.agents],
            "games_per_pair": args.games,
            "budget": args.budget,
            "seed0": args.seed0,
            "workers": args.workers,
            "out": args.out,
        },
    )
    result = wait_for_job(client, job, args.quiet)["result"]
    names = result["agents"]
    width = max(len(n) for n in names) + 2
    print(f"league over {result['games']} games on {result['mode']}:")
    header = " " * width + "".join(f"{n:>{width}}" for n in names)
    print(header + f"{'W':>6}{'D':>6}{'L':>6}")
    for i, name in enumerate(names):
        cells = "".join(
            f"{'-' if v is None else format(v, '.2f'):>{width}}"
            for v in result["matrix"][i]
        )
        t = result["totals"][i]
        print(f"{name:<{width}}" + cells + f"{t['wins']:>6}{t['draws']:>6}{t['losses']:>6}")
    if args.out:
        print(f"results written to {args.out}")
    return 0


def cmd_profile(args) -> int:
    client = ServiceClient(args.url)
    job = client.post(
        "/jobs/profile",
        {
            "mode": args.mode,
            "agent": parse_agent_token(args.agent),
            "games": args.games,
            "budget": args.budget,
            "workers": args.workers,
            "out": args.out,
        },
    )
    result = wait_for_job(client, job, args.quiet)["result"]
    if result.get("error"):
        print(f"profile error: {result['error']}")
        return 1
    labels = ["AC", "AW", "RA", "RF", "UA", "RND"]
    print(f"usage profile of {result['agent']} on {result['mode']} ({result['games']} games):")
    for label, freq in zip(labels, result["frequencies"]):
        print(f"  {label:>4}: {freq:6.3f} {'#' * int(freq * 50)}")
    if args.out:
        print(f"results written to {args.out}")
    return 0


def cmd_tune(args) -> int:
    client = ServiceClient(args.url)
    job = client.post(
        "/jobs/tune",
        {
            "agent": args.agent,
            "mode": args.mode,
            "budget": args.budget,
            "seed": args.seed,
            "games_per_eval": args.games_per_eval,
            "game_budget": args.game_budget,
            "workers": args.workers,
            "out": args.out,
        },
    )
    result = wait_for_job(client, job, args.quiet)["result"]
    print(f"tuned {result['agent']} for {result['mode']} "
          f"({result['evaluations']} evaluations, estimate {result['best_estimate']:.1f}):")
    for key, value in result["best"].items():
        print(f"  {key}: {value}")
    if args.out:
        print(f"results written to {args.out}")
    return 0


def cmd_bench_fm(args) -> int:
    client = ServiceClient(args.url)
    result = client.post("/bench/forward-model", {"mode": args.mode, "seconds": args.seconds})
    print(
        f"forward model on {result['mode']}: "
        f"{result['replay_rate']:,.0f} advance calls/sec (pure), "
        f"{result['playout_rate']:,.0f} calls/sec inside random playouts"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gridclash",
        description="portfolio-search strategy arena: matches, leagues, tuning",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--url", default=None, help="remote service URL (default: in-process)")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)

    p = sub.add_parser("modes", help="list the shipped game modes")
    common(p)
    p.set_defaults(fn=cmd_modes)

    p = sub.add_parser("validate", help="check a mode config file")
    p.add_argument("config")
    common(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("play", help="play one match between two agents")
    p.add_argument("--mode", default="kings")
    p.add_argument("--agents", nargs=2, required=True, metavar="AGENT")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--swapped", action="store_true")
    p.add_argument("--budget", type=int, default=1000)
    common(p)
    p.set_defaults(fn=cmd_play)

    p = sub.add_parser("league", help="round-robin league over agents")
    p.add_argument("--mode", default="kings")
    p.add_argument("--agents", nargs="+", required=True, metavar="AGENT",
                   help="agent kinds, kind:alias, or config files")
    p.add_argument("--games", type=int, default=200, help="games per pair")
    p.add_argument("--budget", type=int, default=1000, help="forward-model calls per decision")
    p.add_argument("--seed0", type=int, default=1)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None, help="output directory for CSV/JSON results")
    common(p)
    p.set_defaults(fn=cmd_league)

    p = sub.add_parser("profile", help="portfolio-usage profile vs the rule-based agent")
    p.add_argument("--agent", required=True)
    p.add_argument("--mode", default="kings")
    p.add_argument("--games", type=int, default=1000)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(fn=cmd_profile)

    p = sub.add_parser("tune", help="NTBEA parameter/portfolio tuning")
    p.add_argument("--agent", required=True, choices=["pgs", "poe", "prhea", "mo-prhea", "s-prhea"])
    p.add_argument("--mode", default="kings")
    p.add_argument("--budget", type=int, default=100, help="parameter points to evaluate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--games-per-eval", type=int, default=20)
    p.add_argument("--game-budget", type=int, default=1000)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(fn=cmd_tune)

    p = sub.add_parser("bench-fm", help="forward-model calls/sec")
    p.add_argument("--seconds", type=float, default=5.0)
    p.add_argument("--mode", default="kings")
    common(p)
    p.set_defaults(fn=cmd_bench_fm)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
