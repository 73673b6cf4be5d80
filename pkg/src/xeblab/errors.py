"""Shared error types: config problems exit 2 at the CLI, resource guards exit 3."""


class ConfigError(ValueError):
    pass


class ResourceGuardError(RuntimeError):
    pass
