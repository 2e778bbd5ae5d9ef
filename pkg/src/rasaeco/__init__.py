"""rasaeco: compile, lint and render AECO system-scenario documents."""

__version__ = "0.1.0"
