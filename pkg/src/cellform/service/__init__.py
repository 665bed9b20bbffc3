"""HTTP service wrapping the library: pydantic request/response models,
handler functions shared with the CLI, and the FastAPI application."""

from .app import app, create_app

__all__ = ["app", "create_app"]
