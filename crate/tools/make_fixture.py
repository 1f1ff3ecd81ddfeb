#!/usr/bin/env python3
"""Author the fixture mini-corpus and verify its disfluency census with an
independent regex scan of the same whole-token filler rule the library uses.

This script is a build-time authoring tool; the repository ships only its
output (tests/data/mini_corpus.txt).
"""
import re
import sys

PAUSE_RE = re.compile(r"\.{2,}|-{2,}|…")
FILLER_RE = re.compile(r"u+h+$|u+[hm]?m+$")
WORDISH_RE = re.compile(r"[^\W\d_]+(?:['’][^\W\d_]*|[^\W\d_])*", re.UNICODE)
# simpler: runs of letters/apostrophes
RUN_RE = re.compile(r"[A-Za-z'’]+")


def is_disfluent(line: str) -> bool:
    if PAUSE_RE.search(line):
        return True
    for run in RUN_RE.findall(line):
        tok = run.replace("'", "").replace("’", "").lower()
        if tok and FILLER_RE.fullmatch(tok):
            return True
    return False


DISFLUENT = [
    "Well... I don't know what you want me to say.",
    "Um, I think we should go now.",
    "Let's see... Susan is not coming back.",
    "Uh, yeah, that's what I thought.",
    "It's just... I never expected this.",
    "And then he said, um, that it was over.",
    "I was, uh, hoping you could help me.",
    "You know... maybe you were right all along.",
    "So, umm, what do we do now?",
    "Give it to us... we can handle it.",
    "Let... let me think about this for a second.",
    "Wait -- you can't be serious.",
    "I mean... it could work, I guess.",
    "Uhh, okay, fine, you win.",
    "The thing is… I never told her.",
    "He was, uhm, not exactly thrilled about it.",
    "We could try the back door... if you're feeling brave.",
    "Ummm, I really don't remember his name.",
    "That's... that's not what I meant and you know it.",
    "I just -- I can't do this anymore.",
    "Maybe, uh, maybe we should call someone.",
    "It was a long time ago... before the war.",
    "Um... no. Absolutely not.",
    "There's something I have to tell you... about your father.",
    "And the, uh, the money is gone too.",
    "Do you... do you even hear yourself right now?",
    "I saw him, um, two or three days ago.",
    "Look, uh, this isn't easy for me either.",
    "She said she'd be here by nine... it's almost midnight.",
    "Okay, umm, let's start from the beginning.",
    "You want the truth? The truth is... complicated.",
    "He's, uhh, he's been acting strange lately.",
    "I thought maybe... maybe you and I could talk.",
    "Right, um, where were we?",
    "The engine just -- it just died on us.",
    "Uh huh, sure, whatever you say.",
    "We've been driving for hours... are we even close?",
    "I, um, I got you something.",
    "It's not that simple... nothing ever is.",
    "So you're saying, uh, that nobody saw anything?",
    "Hold on... did you hear that?",
    "Um, sir? There's a problem with the reactor.",
    "My mother used to say... never trust a quiet house.",
    "Yeah, uh, about that promotion...",
    "This place... it feels wrong somehow.",
    "Uhm, can we not do this here?",
    "I remember the lake... and the cold.",
    "Well, um, that went better than expected.",
    "You don't understand -- you never understood.",
    "Fine... have it your way.",
    "Uh, guys? You need to see this.",
    "The letter said... it said he wasn't coming home.",
    "I was going to tell you, um, eventually.",
    "Everything was fine until... until the lights went out.",
    "Umm... is this thing even on?",
    "He just stood there... watching.",
    "Can you, uh, can you keep a secret?",
    "...",
    "It costs, um, more than we have.",
    "After all these years... you came back.",
    "Uh, no offense, but that plan is terrible.",
    "I keep having this dream... the same one every night.",
    "So, um, how long have you two known each other?",
    "We tried everything -- nothing worked.",
    "Um, okay, don't panic, but I think we're lost.",
    "The doctor said... he said six months.",
    "Listen, uh, I owe you an apology.",
    "There was a time... a time when this town meant something.",
    "Uhh... this is awkward.",
    "And I, um, I never got to say goodbye.",
    "You're telling me the, uh, the whole vault is empty?",
    "Something about her smile... it stayed with me.",
    "Um, yes, hello, is this the police?",
]

CLEAN = [
    "Good morning, everyone.",
    "The train leaves at seven.",
    "I already told you everything I know.",
    "She kept the umbrella by the door.",
    "We spent the whole summer at the lake house.",
    "Nothing unusual here.",
    "He walked uphill both ways, or so he claims.",
    "The museum closes at five on Sundays.",
    "Every human being deserves a second chance.",
    "Dinner is ready.",
    "Take the second left after the bridge.",
    "My brother works at the harbor now.",
    "That was the best album they ever recorded.",
    "Please close the window before you leave.",
    "The meeting starts at nine sharp.",
    "I grew up in a small town by the coast.",
    "You should have seen his face.",
    "The coffee here is terrible.",
    "We won the game by three points.",
    "Her handwriting is impossible to read.",
    "The garden needs water again.",
    "I'll take the night shift this week.",
    "He sold the car to a stranger from the city.",
    "The medium setting works best for this oven.",
    "Hand me that wrench, would you?",
    "The column collapsed during the storm.",
    "She plays the drum in the school band.",
    "It rained for three days straight.",
    "The autumn leaves covered the whole yard.",
    "I was born in 1985, two years after my sister.",
    "Mr. Smith lives on the fourth floor.",
    "Turn the volume down, please.",
    "The recipe calls for two cups of flour.",
    "His answer surprised the whole room.",
    "They moved to the city last spring.",
    "The well-known author signed my copy.",
    "Keep your voice down in the library.",
    "The ferry crosses the bay twice a day.",
    "I finished the report before lunch.",
    "She teaches history at the high school.",
    "The dog barked at the mailman again.",
    "We planted tomatoes along the fence.",
    "The umpire made a terrible call in the ninth.",
    "He hums the same tune every morning.",
    "The aquarium opened a new exhibit.",
    "Dinner will be ready in twenty minutes.",
    "The stadium holds sixty thousand people.",
    "Leave the key under the mat.",
    "Her perfume filled the hallway.",
    "The committee approved the budget on Friday.",
    "I can't find my glasses anywhere.",
    "The bakery sells out by noon.",
    "He repaired the roof before winter.",
    "The orchestra tuned their instruments.",
    "She won a medal at the state fair.",
    "The highway was empty at dawn.",
    "Our neighbors adopted two cats.",
    "The lecture covered the fall of Rome.",
    "He signs his letters with a fountain pen.",
    "The market smells like fresh bread.",
    "A storm knocked out the power last night.",
    "The tailor fixed my jacket in an hour.",
    "She memorized the entire speech.",
    "The fountain in the plaza froze over.",
    "I paid the rent a week early.",
    "The children built a fort in the yard.",
    "His grandfather fought in the war.",
    "The elevator is out of service again.",
    "She folded the laundry while humming.",
    "The captain studied the charts all night.",
    "We watched the sunset from the pier.",
    "The janitor locks up at ten.",
    "Fresh snow covered the mountain pass.",
    "The jury reached a verdict in two hours.",
    "He collects stamps from the 1950s.",
    "The nurse checked on him every hour.",
    "A single candle lit the whole room.",
    "The farmers market opens on Saturdays.",
    "She sketched the bridge from memory.",
    "The mechanic found the problem right away.",
    "Their house sits at the end of a gravel road.",
    "The professor postponed the exam.",
    "I returned the books two days late.",
    "The chorus rehearses on Tuesday nights.",
    "He carved his initials into the bench.",
    "The pharmacy closes early on holidays.",
    "She waters the plants every other day.",
    "The fog rolled in before sunrise.",
    "Our team finished the project ahead of schedule.",
    "The landlord painted the stairwell green.",
    "He whistles when he works.",
    "The river flooded the lower fields.",
    "She wrapped the gift in brown paper.",
    "The clock in the kitchen runs five minutes fast.",
    "They canceled the picnic because of rain.",
    "The barber told the same joke twice.",
    "A hawk circled above the parking lot.",
    "The printer is out of ink again.",
    "She sings in the church choir.",
    "The bus was crowded this morning.",
    "He planted an oak where the shed used to be.",
    "The soup needs more salt.",
    "Their daughter starts school in the fall.",
    "The paint dried unevenly on the porch.",
    "I forgot my password again.",
    "The carpenter measured the frame twice.",
    "A package arrived for you this afternoon.",
    "The choir sang until midnight.",
    "He keeps his tools in perfect order.",
    "The map led us straight to the cabin.",
    "She swims at the public pool on weekends.",
    "The radio played old songs all evening.",
    "The bridge closes for repairs next month.",
    "His cousin runs the hardware store.",
    "The kettle whistled in the kitchen.",
    "We picked apples until the baskets were full.",
    "The librarian knows every title by heart.",
    "The path winds through the birch grove.",
    "She fixed the hem with two quick stitches.",
    "The milk truck comes before dawn.",
    "He reads the paper front to back.",
    "The attic smells like cedar.",
    "Her speech lasted exactly ten minutes.",
    "The gate squeaks when it swings.",
    "They repainted the fence white.",
    "The harvest came in early this year.",
    "Lunch is on me today.",
]

# Interleave so disfluent lines are spread through the file: every e-th line
# from DISFLUENT, remainder from CLEAN, preserving each list's order.
lines = []
di, ci = 0, 0
for i in range(len(DISFLUENT) + len(CLEAN)):
    # ratio 73/200: place a disfluent line whenever its quota falls behind
    want_d = (di + 1) / len(DISFLUENT) <= (i + 1) / (len(DISFLUENT) + len(CLEAN))
    if di < len(DISFLUENT) and (want_d or ci >= len(CLEAN)):
        lines.append(DISFLUENT[di])
        di += 1
    else:
        lines.append(CLEAN[ci])
        ci += 1

assert len(lines) == 200, f"expected 200 lines, got {len(lines)}"

n_disfluent = sum(1 for l in lines if is_disfluent(l))
clean_hits = [l for l in CLEAN if is_disfluent(l)]
disfluent_misses = [l for l in DISFLUENT if not is_disfluent(l)]
if clean_hits:
    print("CLEAN lines flagged disfluent:", clean_hits, file=sys.stderr)
if disfluent_misses:
    print("DISFLUENT lines not flagged:", disfluent_misses, file=sys.stderr)
assert n_disfluent == 73, f"expected 73 disfluent lines, got {n_disfluent}"

with open("/root/crate/crates/disflow/tests/data/mini_corpus.txt", "w", encoding="utf-8") as f:
    f.write("\n".join(lines) + "\n")

print(f"wrote 200 lines, {n_disfluent} disfluent")
