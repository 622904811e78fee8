"""Per-criterion outcomes collected by the acceptance tests."""

RESULTS: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    RESULTS.setdefault(criterion, []).append((bool(ok), detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")


def summary_lines() -> list[str]:
    out = []
    for n in sorted(RESULTS):
        parts = RESULTS[n]
        ok = all(p[0] for p in parts)
        detail = "; ".join(d for _, d in parts)
        out.append(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
    return out
