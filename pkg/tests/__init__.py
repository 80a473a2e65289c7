"""
acr-scan test suite

One module per library module plus CLI tests. Shared fixtures live in
conftest.py.
"""
