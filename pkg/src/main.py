# src/main.py
from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from contextlib import asynccontextmanager
import logging
import time

from src.config.settings import get_settings, setup_logging
from src.cache.redis_manager import RedisManager
from src.routes import counts, expressions, metrics
from src.middleware.logging_middleware import LoggingMiddleware

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Setup and cleanup of application resources"""
    settings = get_settings()
    setup_logging(settings.LOG_LEVEL)
    app.state.settings = settings

    if settings.REDIS_ENABLED:
        redis = RedisManager(ttl=settings.REDIS_CACHE_TTL)
        try:
            await redis.connect(
                host=settings.REDIS_HOST,
                port=settings.REDIS_PORT,
                password=settings.REDIS_PASSWORD
            )
            app.state.redis = redis
        except Exception as e:
            logger.warning("Redis unavailable, serving without cache: %s", e)
    logger.info("Intersection service ready")

    yield

    if getattr(app.state, "redis", None) is not None:
        await app.state.redis.disconnect()
    logger.info("Cleanup completed")


app = FastAPI(
    title="Residual Intersection API",
    description="Exact Chern numbers, line counts and Schubert calculus",
    version="1.0.0",
    lifespan=lifespan
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)
app.add_middleware(LoggingMiddleware)

app.include_router(counts.router)
app.include_router(expressions.router)
app.include_router(metrics.router)


@app.get("/health")
async def health_check(request: Request):
    components = {"cache": "ok" if getattr(request.app.state, "redis", None) else "disabled"}
    return {"status": "ok", "timestamp": time.time(), "components": components}


if __name__ == "__main__":
    import uvicorn
    settings = get_settings()
    uvicorn.run("src.main:app", host=settings.API_HOST, port=settings.API_PORT)
