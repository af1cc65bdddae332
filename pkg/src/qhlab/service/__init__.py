"""HTTP service over the library; see app.py for the route table."""

from .app import app, create_app

__all__ = ["app", "create_app"]
