import time

import pytest

from singforms.corpus import CORPUS
from singforms.pipeline import AnalysisConfig, analyze


@pytest.fixture(scope="session")
def corpus_analysis():
    """Lazily analyze corpus instances once per test session."""
    cache = {}

    def get(name):
        if name not in cache:
            ci = CORPUS[name]
            t0 = time.monotonic()
            res = analyze(
                ci.instance(),
                AnalysisConfig(),
                generators=ci.form_generators() or None,
                mode=ci.mode,
                variables=ci.variables,
            )
            cache[name] = (ci, res, time.monotonic() - t0)
        return cache[name]

    return get
