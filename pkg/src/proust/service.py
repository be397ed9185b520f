"""HTTP front end: POST /op drives the shared protocol handler."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI
from fastapi.staticfiles import StaticFiles

from .protocol import ProtocolRequest, ProtocolResponse, SessionStore, handle


def create_app(store: SessionStore | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    live_store = store if store is not None else SessionStore()
    app = FastAPI(title="proust", docs_url=None, redoc_url=None)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/op", response_model=ProtocolResponse)
    def op(req: ProtocolRequest) -> ProtocolResponse:
        return handle(live_store, req)

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True),
                  name="ui")

    return app
