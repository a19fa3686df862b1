"""Internal helpers for xxzbethe. Not part of the public API."""
