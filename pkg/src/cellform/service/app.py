"""FastAPI application: five POST endpoints over the handler functions.

Library errors surface as HTTP 400 with an envelope {kind, message, detail}
where kind is the exception class name; clients map kinds back to exit codes
or their own error types.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from ..errors import CellformError
from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(title="cellform", version="0.1.0")

    @app.exception_handler(CellformError)
    async def _library_error(request, exc: CellformError):
        return JSONResponse(
            status_code=400,
            content={"kind": type(exc).__name__, "message": str(exc), "detail": exc.detail},
        )

    @app.post("/validate", response_model=models.ValidateReport)
    def validate(req: models.ValidateRequest):
        return handlers.handle_validate(req)

    @app.post("/hodge", response_model=models.HodgeReport)
    def hodge(req: models.HodgeRequest):
        return handlers.handle_hodge(req)

    @app.post("/curvature", response_model=models.CurvatureReportModel)
    def curvature(req: models.CurvatureRequest):
        return handlers.handle_curvature(req)

    @app.post("/check", response_model=models.CheckReport)
    def check(req: models.CheckRequest):
        return handlers.handle_check(req)

    @app.post("/export", response_model=models.ExportReport)
    def export(req: models.ExportRequest):
        return handlers.handle_export(req)

    return app


app = create_app()
