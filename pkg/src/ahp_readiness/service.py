"""HTTP service hosting live pairwise elicitation sessions.

Endpoints (all JSON):

    POST /sessions                      {hierarchy?, node}
    POST /sessions/{id}/participants    {id, weight?}
    PUT  /sessions/{id}/judgments       {participant, row, col, value}
    GET  /sessions/{id}/state
    POST /sessions/{id}/finalize        {force?}

Session state lives in memory; every mutation is appended to a per-session
journal file, and replaying the journal reproduces the state exactly. A
finalized session is persisted as a session file the CLI accepts via
--sessions. All numbers are computed by the core library operations.
Errors carry {code, message, details}.

Mutations within one session are serialized by a per-session lock;
sessions share nothing with each other. Run single-process (in-memory
state does not span workers); authentication is left to a fronting proxy.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .fileio import load_hierarchy, parse_ratio, save_json, session_document
from .group import (
    ParticipantJudgments,
    aggregate_matrices,
    consensus_indicator,
)
from .hierarchy import CriteriaHierarchy
from .pairwise import (
    CR_THRESHOLD,
    SaatyJudgment,
    build_matrix,
    derive_priorities_evm,
    derive_priorities_rgmm,
    most_inconsistent_triads,
    snap_to_scale,
)
from .weighting import ROOT_NODE


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: dict | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details or {}


def _canonical_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


class LiveSession:
    """One elicitation session: a node's items, its participants, and the
    journal of their judgments. Mutations hold the session lock."""

    def __init__(self, session_id: str, node: str, items: tuple[str, ...],
                 journal_path: Path | None):
        self.session_id = session_id
        self.node = node
        self.items = items
        self.participants: dict[str, float | None] = {}
        self.judgments: dict[str, dict[tuple[int, int], float]] = {}
        self.status = "open"
        self.lock = threading.RLock()
        self.journal_path = journal_path

    # -- journaling ----------------------------------------------------

    def _journal(self, record: dict) -> None:
        if self.journal_path is None:
            return
        with open(self.journal_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record) + "\n")

    @classmethod
    def replay(cls, records: list[dict]) -> "LiveSession":
        """Rebuild a session from its journal records."""
        if not records or records[0].get("op") != "create":
            raise ValueError("journal must start with a create record")
        head = records[0]
        session = cls(head["session_id"], head["node"], tuple(head["items"]),
                      journal_path=None)
        for record in records[1:]:
            op = record["op"]
            if op == "register":
                session.participants[record["participant"]] = record["weight"]
                session.judgments.setdefault(record["participant"], {})
            elif op == "judgment":
                session.judgments[record["participant"]][
                    (record["row"], record["col"])
                ] = record["value"]
            elif op == "finalize":
                session.status = "finalized"
            else:
                raise ValueError(f"unknown journal op {op!r}")
        return session

    # -- state ---------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def pair_count(self) -> int:
        return self.n * (self.n - 1) // 2

    def is_complete(self, participant: str) -> bool:
        return len(self.judgments.get(participant, {})) == self.pair_count

    def matrix_of(self, participant: str):
        judgments = [
            SaatyJudgment(row, col, value)
            for (row, col), value in sorted(self.judgments[participant].items())
        ]
        return build_matrix(self.items, judgments)

    def resolved_weights(self) -> dict[str, float]:
        """Explicit weights are relative shares; missing ones mean equal."""
        if not self.participants:
            return {}
        explicit = {p: w for p, w in self.participants.items() if w is not None}
        if not explicit:
            return {p: 1.0 / len(self.participants) for p in self.participants}
        total = sum(explicit.values())
        mean = total / len(explicit)
        raw = {p: self.participants[p] if p in explicit else mean
               for p in self.participants}
        scale = sum(raw.values())
        return {p: w / scale for p, w in raw.items()}

    def participant_state(self, participant: str) -> dict:
        answered = len(self.judgments.get(participant, {}))
        state = {
            "id": participant,
            "weight": self.participants[participant],
            "answered": answered,
            "total": self.pair_count,
            "complete": self.is_complete(participant),
        }
        if state["complete"]:
            matrix = self.matrix_of(participant)
            vector = derive_priorities_evm(matrix)
            array = matrix.to_array()
            state.update({
                "method": "evm",
                "priorities": list(vector.weights),
                "lambda_max": vector.lambda_max,
                "cr": vector.cr,
                "acceptable": vector.acceptable,
                "triads": [
                    {
                        "triangle": [i, j, l],
                        "ids": [self.items[i - 1], self.items[j - 1], self.items[l - 1]],
                        "score": score,
                        "entered": array[i - 1, l - 1],
                        "implied": array[i - 1, j - 1] * array[j - 1, l - 1],
                    }
                    for i, j, l, score in most_inconsistent_triads(matrix, 3)
                ],
            })
        return state

    def _group_members(self) -> list[ParticipantJudgments]:
        weights = self.resolved_weights()
        return [
            ParticipantJudgments(pid, self.matrix_of(pid), weights[pid])
            for pid in self.participants
            if self.is_complete(pid)
        ]

    def group_state(self) -> dict:
        complete = [pid for pid in self.participants if self.is_complete(pid)]
        state: dict = {"ready": len(complete) >= 2, "complete_participants": complete}
        if not state["ready"]:
            return state
        members = self._group_members()
        # renormalize the complete subset's weights so they sum to 1
        subtotal = sum(m.weight for m in members)
        members = [
            ParticipantJudgments(m.participant_id, m.matrix, m.weight / subtotal)
            for m in members
        ]
        matrix = aggregate_matrices(members)
        vector = derive_priorities_evm(matrix)
        consensus = consensus_indicator(
            [derive_priorities_evm(m.matrix) for m in members],
            [m.weight for m in members],
        )
        state.update({
            "method": "evm",
            "priorities": list(vector.weights),
            "lambda_max": vector.lambda_max,
            "cr": vector.cr,
            "acceptable": vector.acceptable,
            "consensus": {
                "s_star": consensus.s_star,
                "alpha_entropy": consensus.alpha_entropy,
                "gamma_entropy": consensus.gamma_entropy,
                "beta_entropy": consensus.beta_entropy,
                "interpretation": consensus.interpretation,
                "acceptable": consensus.acceptable,
                **({"notice": consensus.notice} if consensus.notice else {}),
            },
        })
        return state

    def snapshot(self) -> dict:
        return {
            "session_id": self.session_id,
            "node": self.node,
            "items": list(self.items),
            "status": self.status,
            "pairs": [[row, col] for row, col in _canonical_pairs(self.n)],
            "participants": [self.participant_state(pid) for pid in self.participants],
            "group": self.group_state(),
        }

    # -- mutations (caller holds the lock) ------------------------------

    def register(self, participant: str, weight: float | None) -> None:
        if self.status != "open":
            raise ApiError(409, "session_closed", "session is finalized",
                           {"session_id": self.session_id})
        if participant in self.participants:
            raise ApiError(409, "participant_exists",
                           f"participant '{participant}' is already registered",
                           {"participant": participant})
        if weight is not None and weight <= 0:
            raise ApiError(400, "invalid_weight", "participant weight must be positive",
                           {"weight": weight})
        self.participants[participant] = weight
        self.judgments.setdefault(participant, {})
        self._journal({"op": "register", "participant": participant, "weight": weight})

    def submit(self, participant: str, row: int, col: int, value) -> float:
        if self.status != "open":
            raise ApiError(409, "session_closed", "session is finalized",
                           {"session_id": self.session_id})
        if participant not in self.participants:
            raise ApiError(404, "unknown_participant",
                           f"participant '{participant}' is not registered",
                           {"participant": participant})
        if not (1 <= row < col <= self.n):
            raise ApiError(400, "unknown_pair",
                           f"pair ({row},{col}) is not an upper-triangle pair of "
                           f"{self.n} items", {"row": row, "col": col})
        try:
            parsed = parse_ratio(value)
        except ValueError:
            raise ApiError(400, "invalid_value",
                           f"judgment value {value!r} is not a number or ratio",
                           {"value": str(value)})
        snapped = snap_to_scale(parsed)
        if snapped is None:
            raise ApiError(400, "invalid_value",
                           "judgment must be an integer 1..9 or a reciprocal",
                           {"value": parsed})
        self.judgments[participant][(row, col)] = snapped
        self._journal({"op": "judgment", "participant": participant,
                       "row": row, "col": col, "value": snapped})
        return snapped

    def finalize(self, force: bool) -> dict:
        if self.status != "open":
            raise ApiError(409, "session_closed", "session is already finalized",
                           {"session_id": self.session_id})
        if not self.participants:
            raise ApiError(409, "no_participants", "no participants registered", {})
        incomplete = {
            pid: [
                [row, col]
                for row, col in _canonical_pairs(self.n)
                if (row, col) not in self.judgments[pid]
            ]
            for pid in self.participants
            if not self.is_complete(pid)
        }
        if incomplete:
            raise ApiError(409, "incomplete_matrices",
                           "every participant must complete all pairs",
                           {"missing_pairs": incomplete})
        offenders = {}
        for pid in self.participants:
            vector = derive_priorities_evm(self.matrix_of(pid))
            if not vector.acceptable:
                offenders[pid] = vector.cr
        if offenders and not force:
            raise ApiError(409, "inconsistent_participants",
                           f"consistency ratio not under {CR_THRESHOLD:.2f}; "
                           f"revise judgments or finalize with force",
                           {"cr": offenders})

        members = self._group_members()
        matrix = aggregate_matrices(members)
        evm = derive_priorities_evm(matrix)
        rgmm = derive_priorities_rgmm(matrix)
        consensus = consensus_indicator(
            [derive_priorities_evm(m.matrix) for m in members],
            [m.weight for m in members],
        )
        result = {
            "group_matrix": [
                {"row": j.row, "col": j.col, "value": j.value}
                for j in matrix.judgments()
            ],
            "priorities_evm": list(evm.weights),
            "priorities_rgmm": list(rgmm.weights),
            "lambda_max": evm.lambda_max,
            "cr": evm.cr,
            "acceptable": evm.acceptable,
            "consensus": {
                "s_star": consensus.s_star,
                "interpretation": consensus.interpretation,
                "acceptable": consensus.acceptable,
                **({"notice": consensus.notice} if consensus.notice else {}),
            },
            "forced": bool(force),
        }
        if force and offenders:
            result["warning"] = "finalized despite consistency gate failures"
            result["inconsistent_participants"] = offenders
        document = session_document(self.node, self.items, tuple(members),
                                    method="evm", result=result)
        self.status = "finalized"
        self._journal({"op": "finalize", "force": bool(force)})
        return document


class SessionStore:
    def __init__(self, sessions_dir: Path | None):
        self.sessions: dict[str, LiveSession] = {}
        self.sessions_dir = sessions_dir
        self.lock = threading.Lock()
        if sessions_dir is not None:
            sessions_dir.mkdir(parents=True, exist_ok=True)

    def create(self, node: str, items: tuple[str, ...]) -> LiveSession:
        session_id = uuid.uuid4().hex[:12]
        journal = (self.sessions_dir / f"{session_id}.journal.jsonl"
                   if self.sessions_dir else None)
        session = LiveSession(session_id, node, items, journal)
        with self.lock:
            self.sessions[session_id] = session
        session._journal({"op": "create", "session_id": session_id,
                          "node": node, "items": list(items)})
        return session

    def get(self, session_id: str) -> LiveSession:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise ApiError(404, "unknown_session", f"no session '{session_id}'",
                           {"session_id": session_id})


class CreateSessionBody(BaseModel):
    node: str
    hierarchy: str | None = None


class ParticipantBody(BaseModel):
    id: str
    weight: float | None = None


class JudgmentBody(BaseModel):
    participant: str
    row: int
    col: int
    value: float | str


class FinalizeBody(BaseModel):
    force: bool = False


def _resolve_items(hierarchy: CriteriaHierarchy, node: str) -> tuple[str, tuple[str, ...]]:
    if node == ROOT_NODE:
        return ROOT_NODE, tuple(cat.id for cat in hierarchy.categories)
    try:
        category = hierarchy.category(node)
    except KeyError:
        raise ApiError(404, "unknown_node",
                       f"hierarchy has no node '{node}' (use 'root', a category id, "
                       f"or a category name)", {"node": node})
    return category.id, tuple(c.id for c in category.criteria)


def create_app(hierarchy_path: str | None = None, data_dir: str | None = None,
               frontend_dir: str | None = None) -> FastAPI:
    """Build the service.

    hierarchy_path is the default hierarchy for new sessions (a session
    may name another file). Journals and finalized session files go to
    data_dir/sessions. frontend_dir, when it exists, is served at /.
    """
    app = FastAPI(title="ahp-readiness session service")
    base_dir = Path(data_dir or os.environ.get("AHP_READINESS_OUT", "."))
    store = SessionStore(base_dir / "sessions")
    app.state.store = store
    hierarchies: dict[str, CriteriaHierarchy] = {}

    def hierarchy_for(path: str | None) -> CriteriaHierarchy:
        resolved = path or hierarchy_path
        if resolved is None:
            raise ApiError(400, "no_hierarchy",
                           "no hierarchy configured; pass one in the request body", {})
        if resolved not in hierarchies:
            try:
                hierarchies[resolved] = load_hierarchy(resolved)
            except (OSError, ValueError) as exc:
                raise ApiError(400, "bad_hierarchy",
                               f"cannot load hierarchy '{resolved}': {exc}",
                               {"hierarchy": resolved})
        return hierarchies[resolved]

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"code": exc.code, "message": exc.message, "details": exc.details},
        )

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422,
            content={"code": "invalid_request", "message": "request body is invalid",
                     "details": {"errors": exc.errors()}},
        )

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        hierarchy = hierarchy_for(body.hierarchy)
        node, items = _resolve_items(hierarchy, body.node)
        session = store.create(node, items)
        return {
            "session_id": session.session_id,
            "node": node,
            "items": list(items),
            "pairs": [
                {"row": row, "col": col,
                 "row_item": items[row - 1], "col_item": items[col - 1]}
                for row, col in _canonical_pairs(len(items))
            ],
        }

    @app.post("/sessions/{session_id}/participants")
    def register_participant(session_id: str, body: ParticipantBody):
        session = store.get(session_id)
        with session.lock:
            session.register(body.id, body.weight)
            return {
                "session_id": session_id,
                "participants": [
                    {"id": pid, "weight": weight}
                    for pid, weight in session.participants.items()
                ],
            }

    @app.put("/sessions/{session_id}/judgments")
    def submit_judgment(session_id: str, body: JudgmentBody):
        session = store.get(session_id)
        with session.lock:
            stored = session.submit(body.participant, body.row, body.col, body.value)
            return {
                "session_id": session_id,
                "stored": {"participant": body.participant, "row": body.row,
                           "col": body.col, "value": stored},
                "participant_state": session.participant_state(body.participant),
                "group": session.group_state(),
            }

    @app.get("/sessions/{session_id}/state")
    def session_state(session_id: str):
        session = store.get(session_id)
        with session.lock:
            return session.snapshot()

    @app.post("/sessions/{session_id}/finalize")
    def finalize_session(session_id: str, body: FinalizeBody):
        session = store.get(session_id)
        with session.lock:
            document = session.finalize(body.force)
            path = None
            if store.sessions_dir is not None:
                path = store.sessions_dir / f"{session.session_id}.session.json"
                save_json(document, path)
            return {"session_id": session_id, "session_file": document,
                    **({"path": str(path)} if path else {})}

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")

    return app
