# src/middleware/logging_middleware.py
from fastapi import Request
from starlette.middleware.base import BaseHTTPMiddleware
import logging
import time

from src.routes import metrics

logger = logging.getLogger("src.requests")


class LoggingMiddleware(BaseHTTPMiddleware):
    async def dispatch(self, request: Request, call_next):
        start_time = time.time()
        response = await call_next(request)
        duration = time.time() - start_time

        logger.info(
            "%s %s -> %d in %.2f ms",
            request.method, request.url.path, response.status_code, duration * 1000,
        )
        metrics.track_request(request.method, request.url.path, response.status_code)
        metrics.track_latency(request.method, request.url.path, duration)
        return response
