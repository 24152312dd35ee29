import json
import logging
import redis
from typing import Optional
from app.config import settings

logger = logging.getLogger(__name__)

class ReportCache:
    def __init__(self):
        self.client = redis.from_url(settings.REDIS_URL, decode_responses=True)
        self.default_ttl = 604800  # 7 days in seconds

    @staticmethod
    def _key(theorem: str, fingerprint: str) -> str:
        return f"report:{theorem}:{fingerprint}"

    def get_report(self, theorem: str, fingerprint: str) -> Optional[dict]:
        """
        Get a stored verification report by theorem and structure fingerprint.
        Returns deserialized JSON or None if not found.
        """
        if not settings.CACHE_ENABLED:
            return None

        try:
            data = self.client.get(self._key(theorem, fingerprint))
            if data:
                return json.loads(data)
        except redis.RedisError as e:
            logger.warning(f"Report cache read failed: {e}")
        return None

    def set_report(self, theorem: str, fingerprint: str, report: dict, ttl: int = None) -> None:
        if not settings.CACHE_ENABLED:
            return

        try:
            self.client.set(
                self._key(theorem, fingerprint),
                json.dumps(report, sort_keys=True),
                ex=ttl or self.default_ttl
            )
        except redis.RedisError as e:
            logger.warning(f"Report cache write failed: {e}")

    def get_stats(self) -> dict:
        """Get basic cache statistics."""
        try:
            info = self.client.info()
            return {
                "total_keys": self.client.dbsize(),
                "used_memory": info.get("used_memory_human", "0B"),
                "connected_clients": info.get("connected_clients", 0)
            }
        except redis.RedisError:
            return {"status": "error"}

# Singleton instance
cache = ReportCache()
