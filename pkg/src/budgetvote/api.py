"""HTTP JSON interface for the web client.

All money amounts in request and response bodies are integer euro cents;
timestamps are RFC-3339. Error bodies are `{code, message, details}`.
Mutating endpoints need `Authorization: Bearer <token>`, resolved to a
participant id through the token file (the identity seam); one participant
per token. Handlers are stateless, mutations funnel through the store's
single writer.
"""

from __future__ import annotations

import random
from collections import Counter
from datetime import datetime, timezone
from typing import Callable, Mapping

from fastapi import Body, FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .model import DomainError, Money, format_rfc3339
from .process import phase_at, proposing_allowed, results_visible
from .store import IssueStore

_STATUS_BY_CODE = {
    "no-token": 401,
    "bad-token": 401,
    "results-hidden": 403,
    "unknown-issue": 404,
    "unknown-node": 404,
    "phase-closed": 409,
    "phase-not-voting": 409,
    "cost-frozen": 409,
    "rate-capped": 429,
}


def _status_for(error: DomainError) -> int:
    return _STATUS_BY_CODE.get(error.code, 422)


def create_app(
    store: IssueStore,
    tokens: Mapping[str, str],
    clock: Callable[[], datetime] | None = None,
    request_cap: int = 1000,
) -> FastAPI:
    """Wire the endpoints around one issue store.

    `clock` is injectable so phase behavior is testable; `request_cap` is a
    fixed per-token limit on mutating requests for this process lifetime.
    """
    now = clock or (lambda: datetime.now(timezone.utc))
    app = FastAPI(title="budgetvote", docs_url=None, redoc_url=None)
    mutation_counts: Counter[str] = Counter()

    @app.exception_handler(DomainError)
    async def domain_error_handler(_request: Request, exc: DomainError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={"code": exc.code, "message": exc.message, "details": exc.details},
        )

    def require_issue(issue_id: str):
        if issue_id != store.issue.id:
            raise DomainError("unknown-issue", f"no issue {issue_id}")
        return store.issue

    def require_participant(request: Request) -> str:
        header = request.headers.get("authorization", "")
        scheme, _, token = header.partition(" ")
        if scheme.lower() != "bearer" or not token:
            raise DomainError("no-token", "missing bearer token")
        participant = tokens.get(token.strip())
        if participant is None:
            raise DomainError("bad-token", "unknown token")
        mutation_counts[token] += 1
        if mutation_counts[token] > request_cap:
            raise DomainError("rate-capped", "per-token request cap exceeded")
        return participant

    def schedule_json(schedule) -> dict:
        stamp = lambda dt: format_rfc3339(dt) if dt else None
        return {
            "proposals_close_at": stamp(schedule.proposals_close_at),
            "voting_opens_at": stamp(schedule.voting_opens_at),
            "voting_closes_at": stamp(schedule.voting_closes_at),
            "results_always_visible": schedule.results_always_visible,
        }

    def argument_json(argument) -> dict:
        texts = [store.graph.statements[pid].text for pid in sorted(argument.premises)]
        return {"id": argument.id, "text": "; ".join(texts)}

    def proposal_arguments(proposal_id: str, limit, seed: int) -> dict:
        pro, con = store.graph.position_arguments(proposal_id, limit=limit, seed=seed)
        all_pro, all_con = store.graph.position_arguments(proposal_id, limit=None, seed=seed)
        return {
            "pro": [argument_json(a) for a in pro],
            "con": [argument_json(a) for a in con],
            "pro_total": len(all_pro),
            "con_total": len(all_con),
        }

    @app.get("/issues/{issue_id}")
    def get_issue(issue_id: str):
        issue = require_issue(issue_id)
        at = now()
        return {
            "id": issue.id,
            "title": issue.title,
            "budget": issue.budget_config.budget.cents,
            "cost_min": issue.budget_config.cost_min.cents,
            "cost_max": issue.budget_config.cost_max.cents,
            "phase": phase_at(issue.schedule, at).value,
            "proposing_allowed": proposing_allowed(issue.schedule, at),
            "results_visible": results_visible(issue.schedule, at),
            "schedule": schedule_json(issue.schedule),
            "proposal_count": len(issue.active_proposals()),
        }

    @app.get("/issues/{issue_id}/proposals")
    def list_proposals(issue_id: str, seed: int | None = Query(default=None)):
        issue = require_issue(issue_id)
        echo_seed = seed if seed is not None else random.randrange(2**31)
        proposals = []
        for p in sorted(issue.active_proposals(), key=lambda p: p.ordinal):
            entry = {
                "id": p.id,
                "text": p.text,
                "cost": p.cost.cents,
                "ordinal": p.ordinal,
            }
            entry.update(proposal_arguments(p.id, limit=3, seed=echo_seed))
            proposals.append(entry)
        return {"seed": echo_seed, "proposals": proposals}

    @app.get("/proposals/{proposal_id}/arguments")
    def list_arguments(
        proposal_id: str,
        all: bool = Query(default=False),
        seed: int = Query(default=0),
    ):
        limit = None if all else 3
        payload = proposal_arguments(proposal_id, limit=limit, seed=seed)
        payload["seed"] = seed
        return payload

    @app.put("/issues/{issue_id}/ballot")
    def put_ballot(
        issue_id: str, request: Request, preferences: list[int | str] = Body(...)
    ):
        require_issue(issue_id)
        participant = require_participant(request)
        ballot = store.submit_ballot(
            participant, [str(p) for p in preferences], now()
        )
        return {
            "preferences": list(ballot.preferences),
            "sequence": ballot.sequence,
        }

    @app.post("/issues/{issue_id}/proposals", status_code=201)
    def post_proposal(
        issue_id: str,
        request: Request,
        text: str = Body(...),
        cost: int = Body(...),
    ):
        require_issue(issue_id)
        participant = require_participant(request)
        proposal = store.submit_proposal(text, Money(cost), participant, now())
        return {
            "id": proposal.id,
            "text": proposal.text,
            "cost": proposal.cost.cents,
            "ordinal": proposal.ordinal,
        }

    @app.get("/issues/{issue_id}/result")
    def get_result(issue_id: str):
        issue = require_issue(issue_id)
        if not results_visible(issue.schedule, now()):
            raise DomainError(
                "results-hidden", "results stay hidden until voting closes"
            )
        decision = store.decide()
        board = decision.scoreboard
        return {
            "n_max": board.n_max,
            "rows": {
                pid: {
                    "borda": row.borda,
                    "approval": row.approval,
                    "priority_histogram": list(row.priority_histogram),
                }
                for pid, row in board.rows.items()
            },
            "ranking": list(decision.ranking.ids()),
            "winners": list(decision.winners.winners),
            "spent": decision.winners.spent.cents,
            "leftover": decision.winners.leftover.cents,
            "budget": issue.budget_config.budget.cents,
        }

    return app
