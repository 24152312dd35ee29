from pydantic_settings import BaseSettings

class Settings(BaseSettings):
    PROJECT_NAME: str = "semicon"
    DEBUG: bool = False
    LOG_LEVEL: str = "WARNING"

    # Enumeration guards
    MAX_UNRESTRICTED_SIZE: int = 5
    MAX_PARTITION_SIZE: int = 7
    MAX_MAP_COUNT: int = 100_000
    MAX_STRUCTURE_SIZE: int = 3
    MAX_MEET_SUBSET: int = 3
    MAX_GLOBAL_SIZE: int = 3

    # Sweep workers
    BROKER_URL: str = "memory://"
    RESULT_BACKEND: str = "cache+memory://"
    SWEEP_EAGER: bool = True
    SWEEP_CONCURRENCY: int = 4

    # Report cache
    REDIS_URL: str = "redis://localhost:6379/0"
    CACHE_ENABLED: bool = False

    class Config:
        env_file = ".env"

settings = Settings()
