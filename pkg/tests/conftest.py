def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=0, help="Seed for the randomized property tests")
