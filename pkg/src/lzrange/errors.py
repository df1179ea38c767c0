class ConfigError(ValueError):
    """Inconsistent or out-of-range configuration."""
