class PytestTestRunner:
    """Lets ``manage.py test`` run the pytest suite."""

    def __init__(self, verbosity=1, failfast=False, **kwargs):
        self.verbosity = verbosity
        self.failfast = failfast

    def run_tests(self, test_labels):
        """Run pytest and return the exit code, translating Django's
        verbosity and --failfast options."""
        import pytest

        argv = []
        if self.verbosity == 0:
            argv.append('--quiet')
        if self.verbosity == 2:
            argv.append('--verbose')
        if self.verbosity == 3:
            argv.append('-vv')
        if self.failfast:
            argv.append('--exitfirst')

        argv.extend(test_labels)
        return pytest.main(argv)
