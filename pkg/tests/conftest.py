import functools

from strongweil.catalog import load_catalog, verify_catalog

Q_MATRIX = (2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25)

# criterion number -> (status, detail); filled by test_acceptance
ACCEPTANCE = {}


@functools.lru_cache(maxsize=None)
def catalog_runs():
    """Every (entry, q, report) over the full matrix and all admissible parameters."""
    return tuple(
        (entry, q, rep)
        for entry, q, rep in verify_catalog(Q_MATRIX, all_params=True, catalog=load_catalog())
        if not isinstance(rep, str)
    )


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {detail}")
