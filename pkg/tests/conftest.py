import pytest

from lucbat import default_rule_table

# Opening quatrain of Truyen Kieu: flawless six-eight template, used as the
# canonical perfect stanza throughout the suite.
KIEU = """\
Trăm năm trong cõi người ta
Chữ tài chữ mệnh khéo là ghét nhau
Trải qua một cuộc bể dâu
Những điều trông thấy mà đau đớn lòng"""


@pytest.fixture(scope="session")
def table():
    return default_rule_table()


@pytest.fixture()
def kieu():
    return KIEU
