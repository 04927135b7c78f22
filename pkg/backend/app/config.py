import os


def _env_int(var_name: str, default: int) -> int:
    value = os.getenv(var_name)
    if value is None or not value.strip():
        return default
    try:
        return int(value)
    except ValueError:
        return default


class Config:
    """Base configuration class"""

    SECRET_KEY = os.getenv("SECRET_KEY", "dev-secret-key-change-in-production")

    # Logging
    LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")
    MINING_LOG_LEVEL = os.getenv("HUI_LOG_LEVEL")

    # Mining limits
    MAX_DATASET_BYTES = _env_int("MAX_DATASET_BYTES", 5 * 1024 * 1024)
    # Room for the JSON envelope around the dataset text
    MAX_CONTENT_LENGTH = MAX_DATASET_BYTES + 64 * 1024
    ORACLE_MAX_ITEMS = _env_int("ORACLE_MAX_ITEMS", 20)
    MAX_K = _env_int("MAX_K", 100000)

    JSON_SORT_KEYS = False


class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True


class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    MAX_DATASET_BYTES = 4096
    MAX_CONTENT_LENGTH = 64 * 1024


# Configuration mapping
config = {
    "development": DevelopmentConfig,
    "production": ProductionConfig,
    "testing": TestingConfig,
    "default": DevelopmentConfig
}
