from .common import Common


class Local(Common):
    """Desk-scale runs: verbose logging, reference experiments at reduced size."""
    DEBUG = True

    # Testing
    INSTALLED_APPS = Common.INSTALLED_APPS
    INSTALLED_APPS += ('pytest_django',)
    TEST_RUNNER = 'energymimo.PytestTestRunner.PytestTestRunner'
    # pytest.ini in the project root sets the settings module and coverage
