def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import CRITERIA, RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num, (title, _) in sorted(CRITERIA.items()):
        if num not in RESULTS:
            continue
        ok, detail = RESULTS[num]
        terminalreporter.write_line(f"criterion {num} {'PASS' if ok else 'FAIL'}: {title} -- {detail}")
