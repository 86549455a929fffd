import nox


@nox.session(python=["3.12", "3.13"])
def tests(session):
    session.run("poetry", "install", "--with", "dev", external=True)
    session.run("poetry", "run", "pytest", "-m", "not slow", *session.posargs, external=True)


@nox.session(python="3.12")
def slow(session):
    session.run("poetry", "install", "--with", "dev", external=True)
    session.run("poetry", "run", "pytest", "-m", "slow", *session.posargs, external=True)


@nox.session(python="3.12")
def lint(session):
    session.run("poetry", "install", "--with", "dev", external=True)
    session.run("poetry", "run", "ruff", "check", "src", "tests", external=True)
    session.run("poetry", "run", "mypy", "src", external=True)
