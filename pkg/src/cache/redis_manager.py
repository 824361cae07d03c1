# src/cache/redis_manager.py
from redis.asyncio import Redis
from typing import Any, Dict, Optional
import hashlib
import json
import logging

logger = logging.getLogger(__name__)


class RedisManager:
    """Caches command envelopes as JSON, keyed by command name and inputs."""

    def __init__(self, ttl: int = 3600):
        self._redis: Optional[Redis] = None
        self.ttl = ttl

    async def connect(self, host: str = "localhost", port: int = 6379, password: Optional[str] = None):
        """Connect to Redis"""
        if not self._redis:
            self._redis = Redis(
                host=host,
                port=port,
                password=password,
                decode_responses=True
            )
            await self._redis.ping()
            logger.info("Redis connection established at %s:%d", host, port)

    def attach(self, client) -> None:
        """Use an already constructed async client."""
        self._redis = client

    def is_connected(self) -> bool:
        return self._redis is not None

    async def disconnect(self):
        if self._redis:
            await self._redis.close()
            self._redis = None

    @staticmethod
    def key_for(command: str, inputs: Dict[str, Any]) -> str:
        digest = hashlib.sha256(json.dumps(inputs, sort_keys=True).encode("utf-8")).hexdigest()
        return f"result:{command}:{digest[:32]}"

    async def get_result(self, command: str, inputs: Dict[str, Any]) -> Optional[Dict[str, Any]]:
        if not self._redis:
            return None
        try:
            cached = await self._redis.get(self.key_for(command, inputs))
            return json.loads(cached) if cached else None
        except Exception as e:
            logger.warning("Redis get error: %s", e)
            return None

    async def cache_result(self, command: str, inputs: Dict[str, Any], payload: Dict[str, Any]):
        if not self._redis:
            return
        try:
            await self._redis.setex(self.key_for(command, inputs), self.ttl, json.dumps(payload))
        except Exception as e:
            logger.warning("Redis set error: %s", e)
