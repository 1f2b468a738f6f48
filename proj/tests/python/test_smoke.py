import dyncover


def test_import():
    assert dyncover is not None
