import textwrap
from datetime import datetime, timedelta, timezone
from email.utils import format_datetime

import pytest

from epi_flasher.lexicons import load_lexicons


@pytest.fixture(scope="session")
def lex():
    return load_lexicons()


def make_feed(channel_title, items):
    """Build an RSS 2.0 document. `items` are dicts with title/guid and
    optional description/link/pubDate."""
    blocks = []
    for it in items:
        parts = ["<title>%s</title>" % it["title"]]
        if "description" in it:
            parts.append("<description>%s</description>" % it["description"])
        if "link" in it:
            parts.append("<link>%s</link>" % it["link"])
        if "guid" in it:
            parts.append("<guid>%s</guid>" % it["guid"])
        if "pubDate" in it:
            parts.append("<pubDate>%s</pubDate>" % it["pubDate"])
        blocks.append("<item>%s</item>" % "".join(parts))
    return textwrap.dedent("""\
        <?xml version="1.0" encoding="UTF-8"?>
        <rss version="2.0">
        <channel>
        <title>%s</title>
        <link>https://example.test/</link>
        <description>test feed</description>
        %s
        </channel>
        </rss>
        """) % (channel_title, "\n".join(blocks))


def rss_date(days_ago=0):
    return format_datetime(datetime.now(timezone.utc) - timedelta(days=days_ago))


@pytest.fixture()
def e2e_feeds():
    """The 12-item end-to-end fixture, spread over three channels.

    Channel A: 3 items with disease+city in the title, 2 with the city only
    in the description, 1 disease-without-city. Channel B: 1 more
    disease-without-city, the first copy of a syndicated story (dengue/Lahore,
    same day as A1), and 2 irrelevant items. Channel C: the second copy of
    the syndicated story (same guid, own link) plus 1 irrelevant item.

    Expected outcome: 11 stored items (the guid-duplicate is skipped), 5
    events of which the dengue/Lahore one carries two merged links, and 2
    disease-without-location items.
    """
    d0 = rss_date(1)
    feed_a = make_feed("Channel A", [
        {"title": "لاہور میں ڈینگی کے مریضوں میں اضافہ", "guid": "a1",
         "link": "https://a.test/1", "pubDate": d0},
        {"title": "کراچی میں ہیضہ پھیلنے لگا", "guid": "a2",
         "link": "https://a.test/2", "pubDate": d0},
        {"title": "پشاور میں خسرہ کے کیس رپورٹ", "guid": "a3",
         "link": "https://a.test/3", "pubDate": d0},
        {"title": "ملیریا کے مریضوں میں اضافہ", "guid": "a4",
         "description": "ضلع ملتان میں ملیریا کے مریض بڑھ رہے ہیں",
         "link": "https://a.test/4", "pubDate": d0},
        {"title": "پولیو کا نیا کیس سامنے آگیا", "guid": "a5",
         "description": "سکھر میں پولیو کا نیا کیس سامنے آیا",
         "link": "https://a.test/5", "pubDate": d0},
        {"title": "ٹائیفائیڈ سے بچاؤ کی مہم", "guid": "a6",
         "link": "https://a.test/6", "pubDate": d0},
    ])
    feed_b = make_feed("Channel B", [
        {"title": "ڈینگی وائرس کے خلاف اقدامات", "guid": "b1",
         "link": "https://b.test/1", "pubDate": d0},
        {"title": "لاہور میں ڈینگی سے ہلاکتیں", "guid": "syndicated-x",
         "link": "https://b.test/2", "pubDate": d0},
        {"title": "کرکٹ ٹیم کی شاندار جیت", "guid": "b3",
         "link": "https://b.test/3", "pubDate": d0},
        {"title": "معیشت پر اہم اجلاس طلب", "guid": "b4",
         "link": "https://b.test/4", "pubDate": d0},
    ])
    feed_c = make_feed("Channel C", [
        {"title": "لاہور میں ڈینگی سے ہلاکتیں", "guid": "syndicated-x",
         "link": "https://c.test/2", "pubDate": d0},
        {"title": "موسم کی تازہ صورتحال", "guid": "c2",
         "link": "https://c.test/5", "pubDate": d0},
    ])
    return {"A": feed_a, "B": feed_b, "C": feed_c}
