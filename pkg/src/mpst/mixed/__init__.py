# flake8: noqa
"""mpst-mixed
=

Validation, projection, EFSM compilation and bounded verification of
asynchronous multiparty protocols with asymmetric mixed choice.
"""
