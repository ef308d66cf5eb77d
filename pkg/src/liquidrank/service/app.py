"""HTTP front end for the rank engine and the market simulator.

Engine sessions live in process memory: create one, post rating batches,
and trigger period updates to advance its reputation state. The simulate
endpoint runs a full scenario in one call. Semantic validation failures
(bad parameters, records outside the open period window, unknown modes)
map to 422, unknown session ids to 404.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException

from ..engine import EngineParams, RatingRecord, ReputationState, update_period
from ..market import run_scenario
from .schemas import (
    BufferedResponse,
    CreateEngineRequest,
    EngineResponse,
    HealthResponse,
    RatingsRequest,
    ReportModel,
    ScenarioModel,
    SimulateResponse,
    StateModel,
    UpdateRequest,
)


@dataclass
class _EngineSession:
    params: EngineParams
    state: ReputationState
    buffer: list[RatingRecord] = field(default_factory=list)


def create_app() -> FastAPI:
    app = FastAPI(title="liquidrank", version="0.1.0")
    sessions: dict[str, _EngineSession] = {}
    lock = threading.Lock()
    counter = iter(range(1, 10**9))

    def session_of(engine_id: str) -> _EngineSession:
        session = sessions.get(engine_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"no engine {engine_id!r}")
        return session

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.post("/engines", response_model=EngineResponse)
    def create_engine(request: CreateEngineRequest) -> EngineResponse:
        params = request.params.to_params()
        try:
            params.validate()
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        with lock:
            engine_id = f"eng-{next(counter):04d}"
            sessions[engine_id] = _EngineSession(
                params=params, state=ReputationState(day=0, ranks={})
            )
            state = sessions[engine_id].state
        return EngineResponse(engine_id=engine_id, state=StateModel.from_state(state))

    @app.get("/engines/{engine_id}", response_model=EngineResponse)
    def get_engine(engine_id: str) -> EngineResponse:
        with lock:
            session = session_of(engine_id)
            return EngineResponse(
                engine_id=engine_id, state=StateModel.from_state(session.state)
            )

    @app.delete("/engines/{engine_id}")
    def delete_engine(engine_id: str) -> dict[str, str]:
        with lock:
            session_of(engine_id)
            del sessions[engine_id]
        return {"deleted": engine_id}

    @app.post("/engines/{engine_id}/ratings", response_model=BufferedResponse)
    def post_ratings(engine_id: str, request: RatingsRequest) -> BufferedResponse:
        records = [model.to_record() for model in request.records]
        try:
            for record in records:
                record.validate()
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        with lock:
            session = session_of(engine_id)
            session.buffer.extend(records)
            return BufferedResponse(buffered=len(session.buffer))

    @app.post("/engines/{engine_id}/update", response_model=EngineResponse)
    def post_update(engine_id: str, request: UpdateRequest) -> EngineResponse:
        with lock:
            session = session_of(engine_id)
            try:
                new_state = update_period(
                    session.state, session.buffer, session.params, request.mode
                )
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from None
            session.state = new_state
            session.buffer = []
            return EngineResponse(
                engine_id=engine_id, state=StateModel.from_state(new_state)
            )

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(request: ScenarioModel) -> SimulateResponse:
        config = request.to_config()
        try:
            log, states, report = run_scenario(config)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from None
        return SimulateResponse(
            report=ReportModel.from_report(report),
            final_state=StateModel.from_state(states[-1]) if states else None,
            periods=len(states),
            log_entries=len(log.entries),
        )

    return app
