#!/usr/bin/env python3
# Copyright 2026 The totr Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates the committed test fixtures. Deterministic; rerun after edits.

    python3 tests/data/gen_fixtures.py
"""

import json
import os
import random
import shutil
import string

from PIL import Image

HERE = os.path.dirname(os.path.abspath(__file__))
T0 = 1_600_000_000


def write_jsonl(path, rows):
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for r in rows:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


# ---------------------------------------------------------------------------
# curation: 200 posts with a scenario each; the label is what the scenario
# was built to mean, written down next to it.

def yt(rng):
    return "".join(rng.choice(string.ascii_letters + string.digits) for _ in range(11))


WRONG_GUESSES = [
    "Could it be https://www.imdb.com/title/tt{:07d}/ ?",
    "Maybe this one? https://en.wikipedia.org/wiki/Guess_{}",
    "I think it's the one with the lighthouse, no link sorry ({}).",
    "Sounds like something from the 90s, try searching the archive {}.",
]


def curation_fixture(rng):
    posts, comments, labels = [], [], []
    scenarios = (
        ["nsfw"] * 8 + ["bot_author"] * 8 + ["deleted"] * 8 + ["nsfw_and_deleted"] * 4
        + ["op_confirm"] * 30 + ["op_curly"] * 10 + ["op_yes"] * 8
        + ["modbot_link"] * 16 + ["modbot_flag_quote"] * 8
        + ["flair_op"] * 14 + ["flair_only"] * 10 + ["no_signal"] * 20
        + ["conflict"] * 12 + ["unsolved_word"] * 6 + ["op_self_reply"] * 6
        + ["op_top_level"] * 6 + ["multi_link"] * 10 + ["op_and_bot_agree"] * 16
    )
    assert len(scenarios) == 200, len(scenarios)
    rng.shuffle(scenarios)

    for i, sc in enumerate(scenarios):
        pid = f"p{i:03d}"
        op = f"seeker_{i}"
        t = T0 + i * 10_000
        post = {
            "post_id": pid, "thread": "tipofmytongue",
            "title": f"[TOMT][video] clip number {i} about a {rng.choice(['dog', 'kite', 'train', 'robot'])}",
            "body": "I remember a short video. It had bright colors.",
            "flair_css": None, "author": op, "created_at": t,
            "is_nsfw": False, "is_bot_author": False, "is_deleted": False,
        }
        cs = []
        n = [0]

        def comment(author, body, parent=None, dt=60, bot_flag=None):
            n[0] += 1
            c = {"comment_id": f"{pid}_c{n[0]}", "post_id": pid, "parent_id": parent,
                 "author": author, "body": body, "created_at": t + dt * n[0]}
            if bot_flag is not None:
                c["is_moderator_bot"] = bot_flag
            cs.append(c)
            return c

        def guess():
            g = rng.choice(WRONG_GUESSES).format(rng.randrange(10**6))
            return comment(f"helper_{rng.randrange(1000)}", g)

        label = {"post_id": pid, "expected": None, "filter_reason": None,
                 "answer_links": [], "solving_comment_id": None, "evidence": []}

        if sc in ("nsfw", "bot_author", "deleted", "nsfw_and_deleted"):
            if sc == "nsfw":
                post["is_nsfw"] = True
            elif sc == "bot_author":
                post["is_bot_author"] = True
            elif sc == "deleted":
                post["is_deleted"] = True
            else:
                post["is_nsfw"] = True
                post["is_deleted"] = True
            a = comment("answerer", f"It's https://www.youtube.com/watch?v={yt(rng)}")
            comment(op, "Solved! thanks", parent=a["comment_id"])
            label["expected"] = "filtered"
            label["filter_reason"] = "nsfw" if sc.startswith("nsfw") else ("bot_author" if sc == "bot_author" else "deleted")
        elif sc in ("op_confirm", "op_curly", "op_yes", "flair_op"):
            guess()
            link = f"https://www.youtube.com/watch?v={yt(rng)}"
            a = comment("answerer_a", f"I think this is it: {link}")
            if rng.random() < 0.5:
                guess()
            reply = {"op_confirm": "Solved! Thank you so much.", "op_curly": "That’s it!! wow",
                     "op_yes": "YES! finally", "flair_op": "solved, thanks a lot"}[sc]
            comment(op, reply, parent=a["comment_id"])
            evidence = ["OpReply"]
            if sc == "flair_op":
                post["flair_css"] = rng.choice(["solved", "Solved", "flair solved-post"])
                evidence = ["FlairTag", "OpReply"]
            label.update(expected="Solved", answer_links=[link], solving_comment_id=a["comment_id"], evidence=evidence)
        elif sc == "modbot_link":
            guess()
            link = f"https://youtu.be/{yt(rng)}"
            a = comment("answerer_b", f"[Here you go]({link})")
            comment("TipBot", f"OP marked an answer as correct: {link} . This thread is now closed.")
            label.update(expected="Solved", answer_links=[link], solving_comment_id=a["comment_id"],
                         evidence=["ModBotConfirm"])
        elif sc == "modbot_flag_quote":
            guess()
            answer = f"It is the commercial for Crunchy Oats from 1998, the one with the singing {rng.choice(['moose', 'cactus', 'kettle'])}"
            a = comment("answerer_c", answer)
            comment("ModHelper", f"Marked as solved. Accepted answer: \"{answer}\"", bot_flag=True)
            label.update(expected="Solved", answer_links=[], solving_comment_id=a["comment_id"],
                         evidence=["ModBotConfirm"])
        elif sc == "flair_only":
            post["flair_css"] = "solved"
            guess()
            guess()
            label.update(expected="Unsolved")
        elif sc == "no_signal":
            for _ in range(rng.randrange(0, 4)):
                guess()
            label.update(expected="Unsolved")
        elif sc == "conflict":
            la = f"https://www.youtube.com/watch?v={yt(rng)}"
            lb = f"https://www.youtube.com/watch?v={yt(rng)}"
            a = comment("answerer_a", f"Pretty sure it's {la}")
            comment("answerer_b", f"No, it's {lb}")
            comment(op, "that's it, thanks!", parent=a["comment_id"])
            comment("TipBot", f"Answer recorded: {lb}")
            label.update(expected="Conflict", evidence=["ModBotConfirm", "OpReply"])
        elif sc == "unsolved_word":
            a = comment("answerer_a", f"Try https://www.youtube.com/watch?v={yt(rng)}")
            comment(op, "Still unsolved, that one isn't right", parent=a["comment_id"])
            label.update(expected="Unsolved")
        elif sc == "op_self_reply":
            mine = comment(op, "Edit: adding that it was in black and white.")
            comment(op, "solved", parent=mine["comment_id"])
            label.update(expected="Unsolved")
        elif sc == "op_top_level":
            guess()
            comment(op, "Solved! nevermind, found it myself")
            label.update(expected="Unsolved")
        elif sc == "multi_link":
            l1 = f"https://www.youtube.com/watch?v={yt(rng)}"
            l2 = f"https://en.wikipedia.org/wiki/Clip_{i}"
            a = comment("answerer_d", f"It's [this one]({l2}), full video: {l1}, enjoy")
            comment(op, "yes! that's it", parent=a["comment_id"])
            label.update(expected="Solved", answer_links=[l2, l1], solving_comment_id=a["comment_id"],
                         evidence=["OpReply"])
        elif sc == "op_and_bot_agree":
            guess()
            link = f"https://m.youtube.com/watch?v={yt(rng)}"
            a = comment("answerer_e", f"{link} <- this")
            comment(op, "Solved!", parent=a["comment_id"])
            comment("automod_bot", f"Confirmed answer: {link}")
            label.update(expected="Solved", answer_links=[link], solving_comment_id=a["comment_id"],
                         evidence=["ModBotConfirm", "OpReply"])
        else:
            raise AssertionError(sc)

        label["scenario"] = sc
        posts.append(post)
        comments.extend(cs)
        labels.append(label)

    d = os.path.join(HERE, "curation")
    write_jsonl(os.path.join(d, "posts.jsonl"), posts)
    write_jsonl(os.path.join(d, "comments.jsonl"), comments)
    write_jsonl(os.path.join(d, "labels.jsonl"), labels)


LINK_CASES = [
    ("it's https://youtube.com/watch?v=abc thanks", ["https://youtube.com/watch?v=abc"]),
    ("Found it: [Big Fish](https://en.wikipedia.org/wiki/Big_Fish) and https://youtu.be/xyz123.",
     ["https://en.wikipedia.org/wiki/Big_Fish", "https://youtu.be/xyz123"]),
    ("same https://a.example.com/x twice https://a.example.com/x", ["https://a.example.com/x"]),
    ("no links here, just text", []),
    ("<https://www.imdb.com/title/tt0111161/>", ["https://www.imdb.com/title/tt0111161/"]),
    ("(see https://example.org/page)", ["https://example.org/page"]),
    ("HTTP://EXAMPLE.COM/UPPER, then http://example.com/lower!", ["HTTP://EXAMPLE.COM/UPPER", "http://example.com/lower"]),
    ("link:https://x.org/a?b=1&c=2;", ["https://x.org/a?b=1&c=2"]),
    ("ftp://files.example.com/a is not http", []),
    ("xhttps://bad.example.com glued", []),
    ("[https://md.example.com/label](https://md.example.com/target)",
     ["https://md.example.com/label", "https://md.example.com/target"]),
    ("Multiple: https://one.example.com, https://two.example.com; https://three.example.com.",
     ["https://one.example.com", "https://two.example.com", "https://three.example.com"]),
    ("Try this 'https://quoted.example.com/q' maybe", ["https://quoted.example.com/q"]),
    ("https://youtube.com/watch?v=abc\nhttps://youtube.com/watch?v=def",
     ["https://youtube.com/watch?v=abc", "https://youtube.com/watch?v=def"]),
    ("**Answer**: https://www.youtube.com/watch?v=dQw4w9WgXcQ&t=42s", ["https://www.youtube.com/watch?v=dQw4w9WgXcQ&t=42s"]),
    ("\"https://dq.example.com/path\"", ["https://dq.example.com/path"]),
    ("empty scheme https:// alone", []),
    ("[label only](not-a-url) and https://z.example.com/?", ["https://z.example.com/"]),
    ("unicode café https://ex.example.com/caf%C3%A9 fin", ["https://ex.example.com/caf%C3%A9"]),
    ("[a](https://dup.example.com) again <https://dup.example.com> and https://other.example.com/p?q=[1]",
     ["https://dup.example.com", "https://other.example.com/p?q=[1"]),
]


def links_fixture():
    rows = [{"comment_id": f"l{i:02d}", "body": b, "expected_links": e} for i, (b, e) in enumerate(LINK_CASES)]
    write_jsonl(os.path.join(HERE, "links", "links.jsonl"), rows)


SENTENCES = [
    ("I watched it at my grandma's house.", "Episodic"),
    ("A man juggles fire on a beach.", "ContentNonSemantic"),
    ("The movie is about a detective who loses his memory.", "ContentSemantic"),
    ("We saw it on a rainy Sunday when I was nine.", "Episodic"),
    ("Thanks in advance!", "Other"),
    ("The main character wears a yellow raincoat.", "ContentNonSemantic"),
    ("It was a cartoon about friendship between a fox and a crow.", "ContentSemantic"),
    ("My brother showed it to me years ago.", "Episodic"),
    ("The song had a catchy whistling part.", "ContentNonSemantic"),
    ("Any help is appreciated.", "Other"),
    ("There is a scene where a car drives off a cliff.", "ContentNonSemantic"),
    ("The story follows a family moving to Mars.", "ContentSemantic"),
    ("I remember laughing so hard at it.", "Episodic"),
    ("The narrator has a thick Scottish accent.", "ContentNonSemantic"),
    ("It is a documentary about deep sea creatures.", "ContentSemantic"),
    ("I think I saw it on TV in 2005.", "Episodic"),
    ("Edit: formatting.", "Other"),
    ("The logo is a blue bird on a red circle.", "ContentNonSemantic"),
    ("A girl discovers she can talk to plants.", "ContentSemantic"),
    ("We used to rent it from the video store.", "Episodic"),
    ("The intro shows a city skyline at night.", "ContentNonSemantic"),
    ("The book is a mystery set in a boarding school.", "ContentSemantic"),
    ("My dad played it on his old cassette player.", "Episodic"),
    ("Please help, this is driving me crazy.", "Other"),
    ("Everyone in the ad is dressed in white.", "ContentNonSemantic"),
    ("It is about an old sailor looking for his lost son.", "ContentSemantic"),
    ("I watched the trailer in a cinema in Berlin.", "Episodic"),
    ("The video has a green filter over everything.", "ContentNonSemantic"),
    ("The plot involves time travel and a broken clock.", "ContentSemantic"),
    ("I heard it on the radio during a road trip.", "Episodic"),
    ("Not sure if this is the right sub.", "Other"),
    ("A dog rides a skateboard down a hill.", "ContentNonSemantic"),
    ("The game is about building a kingdom from nothing.", "ContentSemantic"),
    ("My friend and I played it after school.", "Episodic"),
    ("There are talking vegetables in a kitchen.", "ContentNonSemantic"),
    ("The film tells the story of two rival magicians.", "ContentSemantic"),
    ("I found it while browsing late at night.", "Episodic"),
    ("Cheers.", "Other"),
    ("The singer has bright pink hair.", "ContentNonSemantic"),
    ("It is a comedy about a hotel that never closes.", "ContentSemantic"),
    ("We watched it together on a school trip.", "Episodic"),
    ("The background music is a slow piano piece.", "ContentNonSemantic"),
    ("The show is about a robot learning to cook.", "ContentSemantic"),
    ("I saw a clip of it on a forum years back.", "Episodic"),
    ("Update: still looking.", "Other"),
    ("Snow falls on a tiny village made of paper.", "ContentNonSemantic"),
    ("The series follows a mail carrier in a fantasy world.", "ContentSemantic"),
    ("My mom recorded it on a VHS tape.", "Episodic"),
    ("A giant teapot floats over the ocean.", "ContentNonSemantic"),
    ("Thank you all.", "Other"),
]


def sentences_fixture():
    assert len(SENTENCES) == 50
    write_jsonl(os.path.join(HERE, "sentences", "sentences.jsonl"),
                [{"sentence": s, "label": l} for s, l in SENTENCES])


# ---------------------------------------------------------------------------
# scene dedup: 50 OCR sequences with repeats, case and whitespace noise

def dedup_fixture(rng):
    words = ["SALE", "50% off", "Brand X", "call now", "", "new flavor", "limited time", "www.example.com"]
    rows = []
    for i in range(50):
        n = rng.choice([0, 1, 2, 5, 12, 29, 30, 31, 45, 80]) if i >= 10 else i  # small sizes first
        texts = []
        cur = rng.choice(words)
        for _ in range(n):
            if rng.random() < 0.45:
                cur = rng.choice(words)
            t = cur
            r = rng.random()
            if r < 0.15:
                t = t.upper()
            elif r < 0.3:
                t = "  " + t.replace(" ", "   ") + " \t"
            texts.append(t)
        rows.append({"seq_id": f"s{i:02d}", "ocr": texts})
    write_jsonl(os.path.join(HERE, "dedup", "sequences.jsonl"), rows)


# ---------------------------------------------------------------------------
# text generation metrics: 30 candidate/reference pairs

TEXTGEN_PAIRS = [
    ("the cat sat", "the cat sat down"),
    ("the cat sat on the mat", "the cat sat on the mat"),
    ("a man juggles fire on the beach at night", "a man juggles fire on the beach at night"),
    ("completely different words here", "nothing shared at all"),
    ("the the the the", "the cat"),
    ("a red car drives off a cliff", "a blue car drives slowly off the cliff"),
    ("it is a movie about a detective", "the movie is about a detective who forgets"),
    ("dog", "dog"),
    ("dog", "a dog runs"),
    ("a dog runs fast across the field", "dog"),
    ("Time travel, broken clock!", "time-travel and a broken clock"),
    ("the girl talks to plants in the garden", "a girl who can talk to plants"),
    ("rival magicians in london", "two rival magicians compete in london"),
    ("a robot learns to cook pasta", "the show is about a robot learning to cook"),
    ("snow falls on a paper village", "snow falls on a tiny village made of paper"),
    ("one two three four five six", "six five four three two one"),
    ("one two three four five six", "one two three four five six seven eight"),
    ("a b a b a b", "a a b b"),
    ("the quick brown fox jumps over the lazy dog", "the lazy dog jumps over the quick brown fox"),
    ("singer with pink hair", "the singer has bright pink hair"),
    ("yellow raincoat main character", "the main character wears a yellow raincoat"),
    ("commercial for crunchy oats 1998", "it is the commercial for crunchy oats from 1998"),
    ("a giant teapot floats", "a giant teapot floats over the ocean"),
    ("talking vegetables kitchen", "there are talking vegetables in a kitchen"),
    ("old sailor lost son", "it is about an old sailor looking for his lost son"),
    ("a hotel that never closes", "it is a comedy about a hotel that never closes"),
    ("mail carrier fantasy world series", "the series follows a mail carrier in a fantasy world"),
    ("city skyline intro night", "the intro shows a city skyline at night"),
    ("green filter video", "the video has a green filter over everything"),
    ("logo blue bird red circle", "the logo is a blue bird on a red circle"),
]


def textgen_fixture():
    assert len(TEXTGEN_PAIRS) == 30
    write_jsonl(os.path.join(HERE, "textgen", "pairs.jsonl"),
                [{"candidate": c, "reference": r} for c, r in TEXTGEN_PAIRS])


# ---------------------------------------------------------------------------
# analysis: content stats for the CLI

def analysis_fixture(rng):
    genres = ["comedy", "drama", "horror", "fantasy", "adventure", None]
    rows = []
    for i in range(120):
        views = int(10 ** rng.uniform(2, 8))
        row = {"content_id": f"c{i:03d}", "external_views": views,
               "search_count": max(0, int(rng.gauss(1 + 0.6 * (len(str(views)) - 2), 1.0))),
               "genre": rng.choice(genres)}
        if rng.random() < 0.85:
            row["response_time_s"] = round(rng.expovariate(1 / 40000.0), 1)
        if rng.random() < 0.5:
            row["days_since_release"] = rng.randrange(0, 365 * 30)
        elif rng.random() < 0.5:
            y = rng.randrange(1970, 2020)
            row["release_date"] = f"{y}-0{rng.randrange(1, 10)}-1{rng.randrange(0, 10)}"
            row["posted_date"] = "2021-06-15"
        rows.append(row)
    write_jsonl(os.path.join(HERE, "analysis", "stats.jsonl"), rows)


# ---------------------------------------------------------------------------
# end to end: 50 videos (plus three that the asset filter must drop), posts
# recalling them, PRR instances, and generated recalls

THEMES = [
    "lighthouse keeper storm", "penguin bakery morning", "robot gardener roses", "desert train bandits",
    "underwater city lanterns", "dragon kite festival", "haunted piano attic", "space diner waitress",
    "jungle river canoe", "snowman detective case", "circus elephant escape", "volcano island treasure",
    "clockwork owl library", "pirate radio station", "midnight skateboard race", "glass castle princess",
    "zombie chef kitchen", "balloon mail village", "tiny knight snail", "arctic fox lullaby",
    "neon samurai alley", "wizard cat homework", "submarine jazz band", "cowboy alien rodeo",
    "paper boat regatta", "moon rabbit noodles", "thunder giant mountain", "ghost bus driver",
    "cactus dance contest", "firefly night market", "toy soldier parade", "sleepy dinosaur museum",
    "mirror maze twins", "honey bee orchestra", "storm chaser van", "lost glove winter",
    "ninja grandma yoga", "rainbow bridge troll", "goldfish astronaut bowl", "banana phone prank",
    "tea ceremony robot", "windmill inventor girl", "sandcastle kingdom tide", "vampire dentist office",
    "carnival mirror clown", "marble run machine", "bicycle postman hills", "crystal cave miners",
    "owl night school", "pumpkin carriage race",
]
FILLER = ["bright", "quiet", "strange", "funny", "old", "tiny", "loud", "colorful", "slow", "happy"]
RECALL_OPENERS = [
    "I remember a short video where",
    "There was this clip with",
    "Looking for an old video:",
    "Years ago I saw an animation where",
]


def jpeg(path, color):
    Image.new("RGB", (16, 16), color).save(path, "JPEG", quality=70)


def e2e_fixture(rng):
    d = os.path.join(HERE, "e2e")
    if os.path.isdir(d):
        shutil.rmtree(d)
    os.makedirs(os.path.join(d, "assets"))

    videos = []
    for i, theme in enumerate(THEMES):
        vid = "v" + yt(rng)[:10]
        videos.append((vid, theme.split()))

    def write_video(vid, words, duration, available=True):
        vdir = os.path.join(d, "assets", vid)
        os.makedirs(os.path.join(vdir, "scenes"))
        title = " ".join(w.capitalize() for w in words)
        meta = {"video_id": vid, "title": f"The {title}", "duration_s": duration,
                "view_count": rng.randrange(100, 10_000_000), "upload_date": f"20{rng.randrange(10, 23)}-0{rng.randrange(1, 10)}-15",
                "available": available}
        with open(os.path.join(vdir, "meta.json"), "w") as f:
            f.write(json.dumps(meta) + "\n")
        n_scenes = rng.randrange(3, 40)
        lines = []
        cur = ""
        for s in range(n_scenes):
            if s == 0 or rng.random() < 0.4:
                cur = rng.choice([words[0].upper(), f"{words[1]} {words[2]}", "", "subscribe", f"{rng.choice(FILLER)} {words[0]}"])
            lines.append(json.dumps({"index": s, "start_s": round(s * 2.5, 2), "text": cur}))
            jpeg(os.path.join(vdir, "scenes", f"{s:04d}.jpg"), (rng.randrange(256), rng.randrange(256), rng.randrange(256)))
        with open(os.path.join(vdir, "ocr.jsonl"), "w") as f:
            f.write("\n".join(lines) + "\n")
        sents = []
        for _ in range(rng.randrange(3, 7)):
            a, b = rng.sample(words, 2)
            sents.append(f"the {rng.choice(FILLER)} {a} meets the {b}")
        with open(os.path.join(vdir, "transcript.txt"), "w") as f:
            f.write(". ".join(sents) + ".\n")

    for vid, words in videos:
        write_video(vid, words, round(rng.uniform(15, 590), 1))
    # filtered out by the asset filter
    write_video("vtoolong001", ["endless", "tape", "loop"], 3600.0)
    write_video("vgone000001", ["missing", "reel", "box"], 120.0, available=False)
    write_video("vnometa0001", ["mystery", "file", "tag"], None)

    posts, comments = [], []
    k = 0

    def add_post(title, body, answer_body, confirm, flags=None):
        nonlocal k
        pid = f"e{k:03d}"
        t = T0 + k * 3600
        post = {"post_id": pid, "thread": "tipofmytongue", "title": title, "body": body, "flair_css": None,
                "author": f"op_{k}", "created_at": t, "is_nsfw": False, "is_bot_author": False, "is_deleted": False}
        if flags:
            post.update(flags)
        posts.append(post)
        if answer_body is not None:
            comments.append({"comment_id": f"{pid}_a", "post_id": pid, "parent_id": None, "author": "helper",
                             "body": answer_body, "created_at": t + 600 + rng.randrange(0, 90000)})
            if confirm:
                comments.append({"comment_id": f"{pid}_r", "post_id": pid, "parent_id": f"{pid}_a",
                                 "author": f"op_{k}", "body": "Solved! thank you", "created_at": t + 200000})
        k += 1
        return pid

    golden = []
    for vi, (vid, words) in enumerate(videos):
        for rep in range(2 if vi % 3 == 0 else 1):
            w = list(words)
            rng.shuffle(w)
            keep = w[:2] if rep == 0 else w[1:]
            title = f"[TOMT] {rng.choice(FILLER)} video with a {keep[0]}"
            body = (f"{rng.choice(RECALL_OPENERS)} a {rng.choice(FILLER)} {keep[0]} and a {keep[-1]}. "
                    f"I watched it with my cousin when I was little. It was pretty {rng.choice(FILLER)}.")
            link = rng.choice([f"https://www.youtube.com/watch?v={vid}", f"https://youtu.be/{vid}"])
            pid = add_post(title, body, f"Is it this? {link}", True)
            if rep == 0 and len(golden) < 20 and vi % 2 == 0:
                golden.append(pid)
    # noise: unsolved and filtered posts
    for j in range(15):
        add_post(f"[TOMT] something about a {rng.choice(FILLER)} {rng.choice(THEMES).split()[0]}",
                 "Can't remember anything else.", f"maybe https://www.youtube.com/watch?v=zz{j:08d}", False)
    for j in range(5):
        add_post("[TOMT] nsfw thing", "body", None, False, {"is_nsfw": True})

    write_jsonl(os.path.join(d, "posts.jsonl"), posts)
    write_jsonl(os.path.join(d, "comments.jsonl"), comments)
    write_jsonl(os.path.join(d, "golden_queries.jsonl"), [{"record_id": p} for p in golden])

    # generated recalls, one per video
    gen = []
    for vid, words in videos:
        gen.append({"video_id": vid, "generated_recall": f"a {rng.choice(FILLER)} video about a {words[0]} and a {words[2]}"})
    write_jsonl(os.path.join(d, "generated.jsonl"), gen)

    # 100 PRR instances, gold index balanced 20 per option
    golds = [i % 5 for i in range(100)]
    rng.shuffle(golds)
    prr = []
    for i, g in enumerate(golds):
        vid, words = videos[i % len(videos)]
        others = [w for v, w in videos if v != vid]
        distract = rng.sample(others, 4)
        cands = [f"a {rng.choice(FILLER)} scene with a {ws[0]} and a {ws[1]}" for ws in distract]
        cands.insert(g, f"a {rng.choice(FILLER)} scene with a {words[0]} and a {words[1]}")
        prr.append({"video_id": vid, "candidate_prompts": cands, "gold_index": g})
    write_jsonl(os.path.join(d, "prr.jsonl"), prr)


def main():
    rng = random.Random(20261015)
    curation_fixture(rng)
    links_fixture()
    sentences_fixture()
    dedup_fixture(rng)
    textgen_fixture()
    analysis_fixture(rng)
    e2e_fixture(rng)


if __name__ == "__main__":
    main()
