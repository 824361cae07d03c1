# src/routes/metrics.py
from fastapi import APIRouter
from fastapi.responses import Response
from prometheus_client import (
    Counter,
    Histogram,
    generate_latest,
    CONTENT_TYPE_LATEST,
    REGISTRY
)

router = APIRouter(tags=["metrics"])

REQUEST_COUNT = Counter(
    'intersect_http_requests_total',
    'Total number of HTTP requests',
    ['method', 'endpoint', 'status']
)

REQUEST_LATENCY = Histogram(
    'intersect_http_request_duration_seconds',
    'HTTP request latency in seconds',
    ['method', 'endpoint']
)

COMPUTATIONS = Counter(
    'intersect_computations_total',
    'Commands evaluated, by command and cache outcome',
    ['command', 'cache']
)


def track_request(method: str, endpoint: str, status_code: int):
    REQUEST_COUNT.labels(method=method, endpoint=endpoint, status=str(status_code)).inc()


def track_latency(method: str, endpoint: str, duration: float):
    REQUEST_LATENCY.labels(method=method, endpoint=endpoint).observe(duration)


def track_computation(command: str, cached: bool):
    COMPUTATIONS.labels(command=command, cache="hit" if cached else "miss").inc()


@router.get("/metrics")
async def metrics():
    """Prometheus metrics"""
    return Response(generate_latest(REGISTRY), media_type=CONTENT_TYPE_LATEST)
