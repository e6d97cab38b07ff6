"""HTTP service layer: pydantic request/response models, shared handler
functions, and the FastAPI application. The CLI calls the same handlers
in-process, so both front ends expose identical behavior."""

from .app import app, create_app

__all__ = ["app", "create_app"]
