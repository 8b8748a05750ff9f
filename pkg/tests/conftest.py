import pytest

from ucnet import lexical, synthetic
from ucnet.corpus import Comment, Dataset, VideoRecord


@pytest.fixture(scope="session")
def lexicons():
    return lexical.LexiconSet.default()


@pytest.fixture(scope="session")
def phrases():
    return lexical.load_fakeness_phrases()


@pytest.fixture(scope="session")
def scorer(lexicons):
    titles = synthetic.make_labeled_titles(160, seed=5, lexicons=lexicons)
    return lexical.train_title_scorer(titles, lexicons)


def make_comment(cid="c0", text="nice video", likes=0, replies=0,
                 published="2015-01-01T00:00:00Z"):
    return Comment(id=cid, text=text, like_count=likes, reply_count=replies,
                   published_at=published)


def make_video(vid="v0", label="real", title="a plain title", comments=(),
               views=20_000, likes=100, dislikes=10, subs=1000,
               description="", tags=()):
    return VideoRecord(
        id=vid, title=title, description=description, tags=tuple(tags),
        view_count=views, like_count=likes, dislike_count=dislikes,
        channel_subscriber_count=subs, comments=tuple(comments), label=label)


def make_dataset(records, name="test"):
    return Dataset(name=name, records=tuple(records))
