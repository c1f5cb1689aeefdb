"""Regenerate the bundled lexicon files under src/rediag/data/.

Synonym groups expand to directed word -> candidates mappings (every other
group member, group order preserved). Kept deliberately small and
redistribution-safe.
"""

from pathlib import Path

DATA = Path(__file__).resolve().parent.parent / "src" / "rediag" / "data"

SYNONYM_GROUPS = [
    # verbs of residence / location / origin (cue words for the synthetic corpus)
    ["lived", "resided", "dwelt", "stayed", "settled"],
    ["lives", "resides", "dwells", "stays"],
    ["born", "birthed", "delivered"],
    ["works", "labors", "toils", "serves"],
    ["worked", "labored", "toiled", "served"],
    ["founded", "established", "created", "launched", "started"],
    ["headquartered", "based", "located", "situated", "centered"],
    ["capital", "seat"],
    ["moved", "relocated", "shifted", "transferred"],
    ["visited", "toured", "frequented"],
    ["owns", "possesses", "holds", "controls"],
    ["leads", "heads", "directs", "manages", "runs"],
    ["led", "headed", "directed", "managed", "ran"],
    ["joined", "entered", "enrolled"],
    ["left", "departed", "quit", "exited"],
    ["married", "wed", "espoused"],
    ["died", "perished", "expired"],
    ["studied", "researched", "examined", "investigated"],
    ["taught", "instructed", "educated", "tutored"],
    ["wrote", "authored", "penned", "composed"],
    ["built", "constructed", "erected", "assembled"],
    ["bought", "purchased", "acquired", "procured"],
    ["sold", "vended", "auctioned"],
    ["said", "stated", "declared", "remarked", "announced"],
    ["told", "informed", "notified", "advised"],
    ["asked", "inquired", "queried", "questioned"],
    ["answered", "replied", "responded"],
    ["showed", "displayed", "exhibited", "presented", "demonstrated"],
    ["made", "produced", "manufactured", "fabricated"],
    ["gave", "donated", "granted", "bestowed"],
    ["took", "seized", "grabbed", "captured"],
    ["got", "obtained", "received", "gained"],
    ["found", "discovered", "located", "uncovered"],
    ["kept", "retained", "preserved", "maintained"],
    ["began", "commenced", "initiated"],
    ["ended", "finished", "concluded", "terminated"],
    ["helped", "aided", "assisted", "supported"],
    ["used", "utilized", "employed", "applied"],
    ["needed", "required", "demanded"],
    ["wanted", "desired", "wished", "craved"],
    ["liked", "enjoyed", "fancied", "relished"],
    ["hated", "loathed", "despised", "detested"],
    ["saw", "observed", "witnessed", "noticed", "spotted"],
    ["heard", "overheard", "listened"],
    ["felt", "sensed", "perceived"],
    ["thought", "believed", "reckoned", "supposed", "assumed"],
    ["knew", "understood", "recognized", "realized"],
    ["learned", "mastered", "absorbed"],
    ["remembered", "recalled", "recollected"],
    ["forgot", "overlooked", "neglected"],
    ["chose", "selected", "picked", "elected"],
    ["decided", "determined", "resolved"],
    ["tried", "attempted", "endeavored"],
    ["failed", "flopped", "floundered"],
    ["succeeded", "prevailed", "triumphed"],
    ["won", "conquered", "defeated"],
    ["lost", "forfeited", "surrendered"],
    ["fought", "battled", "struggled", "contended"],
    ["argued", "debated", "disputed", "quarreled"],
    ["agreed", "concurred", "assented", "consented"],
    ["refused", "declined", "rejected", "rebuffed"],
    ["allowed", "permitted", "authorized", "sanctioned"],
    ["banned", "prohibited", "forbade", "outlawed"],
    ["changed", "altered", "modified", "transformed", "revised"],
    ["improved", "enhanced", "upgraded", "refined"],
    ["reduced", "decreased", "diminished", "lessened", "lowered"],
    ["increased", "raised", "boosted", "expanded", "enlarged"],
    ["opened", "unlocked", "unsealed"],
    ["closed", "shut", "sealed"],
    ["traveled", "journeyed", "voyaged", "roamed"],
    ["arrived", "reached", "landed"],
    ["returned", "rejoined", "reverted"],
    ["walked", "strolled", "ambled", "marched", "paced"],
    ["ran", "sprinted", "dashed", "raced", "jogged"],
    ["jumped", "leaped", "hopped", "vaulted"],
    ["fell", "dropped", "tumbled", "plunged"],
    ["rose", "ascended", "climbed", "soared"],
    ["carried", "hauled", "transported", "conveyed"],
    ["sent", "dispatched", "shipped", "forwarded"],
    ["brought", "delivered", "fetched"],
    ["threw", "tossed", "hurled", "flung", "pitched"],
    ["caught", "snagged", "trapped", "nabbed"],
    ["pushed", "shoved", "pressed", "thrust"],
    ["pulled", "tugged", "dragged", "yanked"],
    ["broke", "shattered", "smashed", "fractured"],
    ["fixed", "repaired", "mended", "restored"],
    ["cleaned", "washed", "scrubbed", "polished"],
    ["cooked", "prepared", "baked"],
    ["ate", "consumed", "devoured"],
    ["drank", "sipped", "gulped", "swallowed"],
    ["slept", "dozed", "napped", "snoozed"],
    ["woke", "roused", "stirred"],
    ["spoke", "talked", "conversed", "chatted"],
    ["shouted", "yelled", "screamed", "hollered", "bellowed"],
    ["whispered", "murmured", "muttered", "mumbled"],
    ["laughed", "chuckled", "giggled", "snickered"],
    ["cried", "wept", "sobbed", "wailed"],
    ["smiled", "grinned", "beamed"],
    ["frowned", "scowled", "glowered", "grimaced"],
    ["looked", "gazed", "stared", "glanced", "peered"],
    ["watched", "monitored", "surveyed", "observed"],
    ["hid", "concealed", "covered", "masked"],
    ["revealed", "disclosed", "exposed", "unveiled"],
    ["protected", "guarded", "defended", "shielded"],
    ["attacked", "assaulted", "ambushed", "raided"],
    ["destroyed", "demolished", "ruined", "wrecked", "razed"],
    ["saved", "rescued", "salvaged", "preserved"],
    ["killed", "slew", "slaughtered", "executed"],
    ["hurt", "injured", "wounded", "harmed"],
    ["healed", "cured", "recovered", "mended"],
    ["grew", "expanded", "developed", "flourished"],
    ["shrank", "contracted", "dwindled", "withered"],
    # adjectives
    ["big", "large", "huge", "enormous", "massive", "giant", "immense", "vast"],
    ["small", "little", "tiny", "miniature", "minute", "petite"],
    ["fast", "quick", "rapid", "swift", "speedy", "brisk"],
    ["slow", "sluggish", "leisurely", "unhurried"],
    ["good", "fine", "excellent", "superb", "splendid", "admirable"],
    ["bad", "poor", "awful", "terrible", "dreadful", "lousy"],
    ["happy", "glad", "joyful", "cheerful", "delighted", "merry", "content"],
    ["sad", "unhappy", "sorrowful", "gloomy", "mournful", "dejected"],
    ["angry", "furious", "irate", "enraged", "livid", "incensed"],
    ["calm", "tranquil", "serene", "peaceful", "placid", "composed"],
    ["afraid", "scared", "frightened", "terrified", "fearful"],
    ["brave", "courageous", "valiant", "fearless", "bold", "daring"],
    ["smart", "clever", "intelligent", "bright", "brilliant", "astute"],
    ["stupid", "foolish", "dumb", "dim", "dense"],
    ["beautiful", "pretty", "lovely", "gorgeous", "attractive", "handsome"],
    ["ugly", "hideous", "unsightly", "unattractive"],
    ["rich", "wealthy", "affluent", "prosperous", "opulent"],
    ["poor", "impoverished", "destitute", "needy", "broke"],
    ["strong", "powerful", "mighty", "sturdy", "robust", "tough"],
    ["weak", "feeble", "frail", "fragile", "flimsy"],
    ["old", "ancient", "aged", "elderly", "antique", "venerable"],
    ["new", "fresh", "novel", "recent", "modern", "current"],
    ["young", "youthful", "juvenile", "adolescent"],
    ["hot", "scorching", "sweltering", "boiling", "blazing"],
    ["cold", "chilly", "freezing", "frigid", "icy", "frosty"],
    ["wet", "damp", "moist", "soggy", "drenched", "soaked"],
    ["dry", "arid", "parched", "dehydrated"],
    ["clean", "spotless", "pristine", "immaculate", "tidy"],
    ["dirty", "filthy", "grimy", "soiled", "grubby"],
    ["bright", "radiant", "luminous", "gleaming", "shining", "vivid"],
    ["dark", "dim", "murky", "gloomy", "shadowy", "dusky"],
    ["loud", "noisy", "deafening", "thunderous", "booming"],
    ["quiet", "silent", "hushed", "muted", "soft"],
    ["hard", "difficult", "tough", "arduous", "demanding", "strenuous"],
    ["easy", "simple", "effortless", "straightforward", "painless"],
    ["important", "significant", "crucial", "vital", "essential", "critical"],
    ["trivial", "minor", "insignificant", "negligible", "petty"],
    ["famous", "renowned", "celebrated", "noted", "prominent", "eminent"],
    ["unknown", "obscure", "anonymous", "nameless"],
    ["common", "ordinary", "usual", "typical", "everyday", "frequent"],
    ["rare", "scarce", "uncommon", "unusual", "infrequent"],
    ["strange", "odd", "weird", "peculiar", "bizarre", "curious"],
    ["normal", "regular", "standard", "conventional", "customary"],
    ["true", "accurate", "correct", "factual", "genuine"],
    ["false", "untrue", "incorrect", "erroneous", "mistaken"],
    ["whole", "entire", "complete", "total", "full"],
    ["empty", "vacant", "hollow", "bare", "void"],
    ["busy", "occupied", "engaged", "swamped"],
    ["idle", "inactive", "dormant", "unoccupied"],
    ["funny", "amusing", "humorous", "comical", "hilarious", "witty"],
    ["serious", "grave", "solemn", "earnest", "somber"],
    ["careful", "cautious", "prudent", "meticulous", "vigilant", "wary"],
    ["careless", "reckless", "negligent", "sloppy", "rash"],
    ["honest", "truthful", "sincere", "candid", "frank"],
    ["dishonest", "deceitful", "untruthful", "fraudulent"],
    ["kind", "gentle", "compassionate", "benevolent", "considerate"],
    ["cruel", "brutal", "ruthless", "merciless", "vicious", "savage"],
    ["polite", "courteous", "respectful", "civil", "gracious"],
    ["rude", "impolite", "discourteous", "insolent", "impertinent"],
    ["tired", "exhausted", "weary", "fatigued", "drained"],
    ["energetic", "lively", "vigorous", "dynamic", "spirited"],
    ["healthy", "fit", "well", "sound", "hale"],
    ["sick", "ill", "unwell", "ailing", "diseased"],
    ["safe", "secure", "protected", "sheltered"],
    ["dangerous", "hazardous", "perilous", "risky", "unsafe"],
    ["expensive", "costly", "pricey", "exorbitant"],
    ["cheap", "inexpensive", "affordable", "economical"],
    ["tall", "towering", "lofty", "high"],
    ["short", "brief", "concise", "succinct"],
    ["wide", "broad", "expansive", "extensive"],
    ["narrow", "slim", "slender", "thin"],
    ["heavy", "weighty", "hefty", "ponderous"],
    ["light", "lightweight", "airy", "feathery"],
    ["deep", "profound", "bottomless", "abysmal"],
    ["shallow", "superficial", "skin-deep"],
    ["smooth", "sleek", "polished", "glossy", "silky"],
    ["rough", "coarse", "jagged", "rugged", "uneven"],
    ["sharp", "keen", "pointed", "acute"],
    ["dull", "blunt", "tedious", "monotonous"],
    ["sweet", "sugary", "honeyed", "saccharine"],
    ["bitter", "acrid", "harsh", "sour"],
    ["main", "principal", "primary", "chief", "foremost", "leading"],
    ["final", "last", "ultimate", "concluding", "closing"],
    ["early", "initial", "preliminary", "premature"],
    ["late", "tardy", "delayed", "overdue", "belated"],
    ["near", "close", "nearby", "adjacent", "neighboring"],
    ["far", "distant", "remote", "faraway"],
    ["certain", "sure", "confident", "positive", "convinced"],
    ["doubtful", "uncertain", "dubious", "skeptical", "hesitant"],
    ["popular", "favored", "beloved", "fashionable", "trendy"],
    ["ancient", "archaic", "prehistoric", "primeval"],
    ["modern", "contemporary", "current", "present-day"],
    ["huge", "gigantic", "colossal", "mammoth", "monumental", "tremendous"],
    ["major", "principal", "dominant", "paramount"],
    ["local", "regional", "nearby", "neighborhood"],
    ["national", "federal", "countrywide", "domestic"],
    ["global", "worldwide", "international", "universal"],
    # nouns
    ["city", "town", "metropolis", "municipality"],
    ["village", "hamlet", "settlement"],
    ["house", "home", "residence", "dwelling", "abode"],
    ["building", "structure", "edifice", "construction"],
    ["road", "street", "avenue", "boulevard", "lane"],
    ["path", "trail", "track", "route"],
    ["car", "automobile", "vehicle", "auto"],
    ["ship", "boat", "vessel", "craft"],
    ["plane", "aircraft", "airplane", "jet"],
    ["station", "stop", "terminal", "depot"],
    ["airport", "airfield", "aerodrome"],
    ["harbor", "port", "dock", "wharf"],
    ["company", "firm", "corporation", "business", "enterprise"],
    ["factory", "plant", "mill", "workshop"],
    ["store", "shop", "market", "outlet", "boutique"],
    ["school", "academy", "institute", "college"],
    ["hospital", "clinic", "infirmary"],
    ["doctor", "physician", "medic", "clinician"],
    ["teacher", "instructor", "educator", "tutor", "professor"],
    ["student", "pupil", "learner", "scholar"],
    ["worker", "employee", "laborer", "staffer"],
    ["boss", "manager", "supervisor", "chief", "director"],
    ["leader", "head", "commander", "ruler"],
    ["king", "monarch", "sovereign", "ruler"],
    ["soldier", "trooper", "warrior", "fighter", "combatant"],
    ["police", "constabulary", "officers"],
    ["lawyer", "attorney", "counsel", "advocate", "solicitor"],
    ["judge", "justice", "magistrate", "arbiter"],
    ["writer", "author", "novelist", "scribe", "wordsmith"],
    ["artist", "painter", "creator"],
    ["singer", "vocalist", "crooner"],
    ["actor", "performer", "thespian"],
    ["movie", "film", "picture", "feature"],
    ["song", "tune", "melody", "ballad", "anthem"],
    ["book", "volume", "tome", "publication"],
    ["story", "tale", "narrative", "account", "yarn"],
    ["newspaper", "journal", "gazette", "daily"],
    ["picture", "image", "photo", "photograph", "portrait"],
    ["money", "cash", "currency", "funds", "capital"],
    ["job", "occupation", "profession", "career", "vocation", "employment"],
    ["salary", "wage", "pay", "earnings", "income"],
    ["gift", "present", "donation", "offering"],
    ["prize", "award", "trophy", "reward"],
    ["war", "conflict", "warfare", "hostilities"],
    ["battle", "fight", "combat", "skirmish", "clash"],
    ["peace", "truce", "armistice", "harmony"],
    ["friend", "companion", "pal", "buddy", "comrade"],
    ["enemy", "foe", "adversary", "opponent", "rival"],
    ["child", "kid", "youngster", "youth", "minor"],
    ["baby", "infant", "newborn", "toddler"],
    ["man", "gentleman", "fellow", "male"],
    ["woman", "lady", "female"],
    ["people", "persons", "individuals", "folks", "citizens"],
    ["crowd", "throng", "mob", "multitude", "horde"],
    ["group", "team", "squad", "crew", "band"],
    ["country", "nation", "state", "land"],
    ["region", "area", "zone", "district", "territory"],
    ["border", "boundary", "frontier", "edge"],
    ["mountain", "peak", "summit", "mount"],
    ["river", "stream", "creek", "brook"],
    ["lake", "pond", "lagoon", "reservoir"],
    ["sea", "ocean", "deep"],
    ["forest", "woods", "woodland", "grove"],
    ["field", "meadow", "pasture", "plain"],
    ["desert", "wasteland", "badlands"],
    ["island", "isle", "islet", "atoll"],
    ["weather", "climate", "conditions"],
    ["storm", "tempest", "squall", "gale"],
    ["rain", "rainfall", "shower", "drizzle", "downpour"],
    ["wind", "breeze", "gust", "draft"],
    ["snow", "snowfall", "flurry"],
    ["fire", "blaze", "flame", "inferno"],
    ["earthquake", "quake", "tremor"],
    ["flood", "deluge", "inundation"],
    ["disease", "illness", "sickness", "ailment", "malady"],
    ["medicine", "drug", "remedy", "medication", "cure"],
    ["food", "fare", "cuisine", "nourishment", "sustenance"],
    ["meal", "dinner", "feast", "banquet", "repast"],
    ["drink", "beverage", "refreshment"],
    ["water", "aqua", "liquid"],
    ["house", "lodging", "quarters", "accommodation"],
    ["room", "chamber", "quarters"],
    ["door", "doorway", "entrance", "entry", "portal"],
    ["window", "pane", "opening"],
    ["wall", "barrier", "partition", "bulwark"],
    ["floor", "ground", "deck"],
    ["roof", "rooftop", "ceiling"],
    ["garden", "yard", "plot", "grounds"],
    ["tree", "sapling", "timber"],
    ["flower", "blossom", "bloom"],
    ["grass", "turf", "lawn", "sod"],
    ["animal", "creature", "beast", "critter"],
    ["dog", "hound", "canine", "pup"],
    ["cat", "feline", "kitty"],
    ["horse", "steed", "stallion", "mare", "mount"],
    ["bird", "fowl", "avian"],
    ["fish", "catch", "seafood"],
    ["idea", "notion", "concept", "thought", "conception"],
    ["plan", "scheme", "strategy", "blueprint", "design"],
    ["problem", "issue", "difficulty", "trouble", "dilemma"],
    ["answer", "solution", "response", "reply"],
    ["question", "query", "inquiry", "interrogation"],
    ["reason", "cause", "motive", "rationale", "grounds"],
    ["result", "outcome", "consequence", "effect", "upshot"],
    ["beginning", "start", "onset", "outset", "commencement"],
    ["end", "finish", "conclusion", "termination", "close"],
    ["middle", "center", "midpoint", "midst"],
    ["part", "portion", "section", "segment", "piece", "fraction"],
    ["amount", "quantity", "sum", "measure", "volume"],
    ["number", "figure", "digit", "numeral"],
    ["speed", "velocity", "pace", "tempo", "rate"],
    ["power", "strength", "force", "might", "energy"],
    ["danger", "peril", "hazard", "risk", "threat"],
    ["fear", "dread", "terror", "fright", "alarm"],
    ["hope", "optimism", "aspiration", "expectation"],
    ["love", "affection", "adoration", "devotion", "fondness"],
    ["hate", "hatred", "loathing", "animosity", "enmity"],
    ["joy", "delight", "happiness", "bliss", "elation"],
    ["sorrow", "grief", "sadness", "misery", "woe"],
    ["anger", "rage", "fury", "wrath", "ire"],
    ["surprise", "astonishment", "amazement", "shock"],
    ["luck", "fortune", "chance", "fate"],
    ["truth", "fact", "reality", "veracity"],
    ["lie", "falsehood", "fabrication", "untruth", "fib"],
    ["secret", "mystery", "confidence", "enigma"],
    ["law", "statute", "regulation", "ordinance", "rule"],
    ["crime", "offense", "felony", "misdeed", "violation"],
    ["thief", "robber", "burglar", "bandit", "crook"],
    ["prison", "jail", "penitentiary", "lockup"],
    ["trial", "hearing", "proceeding", "case"],
    ["agreement", "contract", "pact", "accord", "treaty", "deal"],
    ["meeting", "gathering", "assembly", "conference", "session"],
    ["speech", "address", "talk", "lecture", "oration"],
    ["debate", "discussion", "argument", "deliberation"],
    ["journey", "trip", "voyage", "expedition", "trek", "excursion"],
    ["holiday", "vacation", "break", "getaway"],
    ["game", "match", "contest", "competition"],
    ["sport", "athletics", "recreation"],
    ["music", "melody", "harmony"],
    ["dance", "ballet", "waltz"],
    ["party", "celebration", "festivity", "gala", "bash"],
    ["wedding", "marriage", "nuptials", "union"],
    ["funeral", "burial", "interment"],
    ["birth", "delivery", "arrival"],
    ["death", "demise", "passing", "decease"],
    ["life", "existence", "being", "lifetime"],
    ["world", "globe", "earth", "planet"],
    ["universe", "cosmos", "creation"],
    ["time", "period", "era", "epoch", "age"],
    ["moment", "instant", "second", "flash"],
    ["year", "annum", "twelvemonth"],
    ["history", "past", "chronicle", "record", "annals"],
    ["future", "tomorrow", "prospect", "outlook"],
    ["work", "labor", "toil", "effort", "exertion"],
    ["rest", "repose", "relaxation", "respite", "leisure"],
    ["sleep", "slumber", "rest", "doze"],
    ["dream", "vision", "fantasy", "reverie"],
    ["noise", "sound", "din", "racket", "clamor"],
    ["silence", "quiet", "stillness", "hush"],
    ["light", "illumination", "glow", "radiance", "brightness"],
    ["darkness", "gloom", "shadow", "dusk", "murk"],
    ["color", "hue", "shade", "tint", "tone"],
    ["shape", "form", "figure", "contour", "outline"],
    ["size", "dimension", "magnitude", "proportion"],
    ["weight", "mass", "heft", "load"],
    ["top", "summit", "peak", "apex", "crown"],
    ["bottom", "base", "foot", "foundation"],
    ["front", "fore", "face", "facade"],
    ["back", "rear", "reverse", "posterior"],
    ["side", "flank", "edge", "margin"],
    ["inside", "interior", "inner"],
    ["outside", "exterior", "outer"],
    # adverbs & connectives
    ["quickly", "rapidly", "swiftly", "speedily", "hastily", "promptly"],
    ["slowly", "gradually", "leisurely", "sluggishly"],
    ["often", "frequently", "regularly", "repeatedly", "commonly"],
    ["rarely", "seldom", "infrequently", "scarcely"],
    ["always", "constantly", "perpetually", "invariably", "forever"],
    ["never", "nevermore"],
    ["soon", "shortly", "presently", "momentarily"],
    ["now", "currently", "presently", "today"],
    ["here", "hither", "hereabouts"],
    ["there", "thither", "thereabouts"],
    ["almost", "nearly", "virtually", "practically", "approximately"],
    ["completely", "entirely", "totally", "wholly", "fully", "utterly"],
    ["partly", "partially", "somewhat", "moderately"],
    ["very", "extremely", "exceedingly", "immensely", "tremendously"],
    ["really", "truly", "genuinely", "actually", "indeed"],
    ["maybe", "perhaps", "possibly", "conceivably"],
    ["certainly", "surely", "definitely", "undoubtedly", "assuredly"],
    ["together", "jointly", "collectively", "mutually"],
    ["alone", "solo", "solitarily", "singly"],
    ["carefully", "cautiously", "prudently", "meticulously", "gingerly"],
    ["suddenly", "abruptly", "unexpectedly", "instantly"],
    ["finally", "eventually", "ultimately", "lastly"],
    ["firstly", "initially", "originally", "primarily"],
    ["also", "additionally", "furthermore", "moreover", "besides"],
    ["however", "nevertheless", "nonetheless", "yet"],
    ["therefore", "thus", "hence", "consequently", "accordingly"],
]

STOPWORDS = """a about above after again against all am an and any are aren't as at be because been
before being below between both but by can't cannot could couldn't did didn't do does doesn't doing
don't down during each few for from further had hadn't has hasn't have haven't having he he'd he'll
he's her here here's hers herself him himself his how how's i i'd i'll i'm i've if in into is isn't
it it's its itself let's me more most mustn't my myself no nor not of off on once only or other
ought our ours ourselves out over own same shan't she she'd she'll she's should shouldn't so some
such than that that's the their theirs them themselves then there there's these they they'd they'll
they're they've this those through to too under until up very was wasn't we we'd we'll we're we've
were weren't what what's when when's where where's which while who who's whom why why's with won't
would wouldn't you you'd you'll you're you've your yours yourself yourselves , . ; : ! ? ' " ( ) -
""".split()

PERSON = """James Mary Robert Patricia John Jennifer Michael Linda David Elizabeth William Barbara
Richard Susan Joseph Jessica Thomas Sarah Charles Karen Christopher Lisa Daniel Nancy Matthew Betty
Anthony Margaret Mark Sandra Donald Ashley Steven Kimberly Paul Emily Andrew Donna Joshua Michelle
Kenneth Carol Kevin Amanda Brian Dorothy George Melissa Timothy Deborah Ronald Stephanie Edward
Rebecca Jason Sharon Jeffrey Laura Ryan Cynthia Jacob Kathleen Gary Amy Nicholas Angela Eric Shirley
Jonathan Anna Stephen Brenda Larry Pamela Justin Emma Scott Nicole Brandon Helen Benjamin Samantha
Samuel Katherine Gregory Christine Alexander Debra Patrick Rachel Frank Carolyn Raymond Janet Jack
Maria Dennis Heather Jerry Diane Tyler Virginia Aaron Julie Jose Joyce Adam Victoria Nathan Olivia
Henry Kelly Douglas Christina Zachary Lauren Peter Joan Kyle Evelyn Noah Judith Ethan Megan Jeremy
Andrea Walter Cheryl Christian Hannah Keith Jacqueline Roger Martha Terry Gloria Austin Teresa Sean
Ann Gerald Sara Carl Madison Harold Frances Dylan Kathryn Arthur Janice Lawrence Jean Jordan Abigail
Jesse Alice Bryan Julia Billy Judy Bruce Sophia Gabriel Grace Joe Denise Logan Amber Alan Doris
Juan Marilyn Albert Danielle Willie Beverly Elijah Isabella Wayne Theresa Randy Diana Vincent
Natalie Mason Brittany Roy Charlotte Ralph Marie Bobby Kayla Russell Alexis Bradley Lori""".split()

LOCATION = """Yaletown|Springfield|Riverton|Oakdale|Fairview|Lakeside|Brookfield|Greenville|Ashford
Milltown|Clearwater|Stonebridge|Maplewood|Cedarville|Elmhurst|Pinehurst|Rosewood|Willowbrook
Northgate|Southport|Eastham|Westfield|Harborview|Kingsbury|Queensland|Bayside|Hillcrest|Meadowvale
Sunnyvale|Granite Falls|Silver Creek|Ironwood|Copperfield|Goldcrest|Amberly|Crystal Lake|Foxborough
Ravenswood|Thornbury|Wolfville|Bearbrook|Eagleton|Hawthorne|Birchwood|Aspen Grove|Hollyfield
Ivybridge|Fernwood|Mosswood|Heatherton|Bramblewood|Clifton|Dovercourt|Easton|Felixstowe|Garfield
Hartfield|Ingleside|Jasperville|Kenwood|Larchmont|Middleton|Norwood|Ottersfield|Pembroke|Quarryville
Redstone|Saltford|Tanglewood|Underhill|Vantage Point|Wyndham|Yardley|Zephyr Cove|Alderney|Bexley
Caldwell|Denholm|Eldridge|Farnham|Glenwood|Harrowgate|Islington|Jericho|Kimberton|Longford
Marlborough|Newbridge|Oakham|Pattersonville|Quindale|Rutherford|Stanfield|Thistledown|Uxbridge
Valemont|Wakefield|Yorkdale|Zetland|Arrowhead|Bluewater|Cragside|Dunmore|New Amstelveen"""

ORGANIZATION = """Acme Corporation|Globex Industries|Initech Systems|Umbrella Holdings|Stark Enterprises
Wayne Industries|Cyberdyne Labs|Tyrell Group|Wonka Factories|Oscorp Technologies|Vandelay Imports
Hooli Ventures|Pied Piper Software|Aperture Science|Black Mesa Research|Weyland Consortium
Sirius Analytics|Monarch Solutions|Abstergo Industries|Gekko Capital|Duff Brewing|Sterling Cooper
Dunder Mifflin|Prestige Worldwide|Bluth Company|Massive Dynamic|Veridian Dynamics|Hanso Foundation
Rekall Incorporated|Soylent Corporation|Omni Consumer Products|Nakatomi Trading|Zorg Industries
Virtucon Enterprises|InGen Biosciences|Cortex Semiconductor|Lumon Industries|Vehement Capital
Strickland Propane|Primatech Paper|Sandpiper Air|Yoyodyne Propulsion|Octan Energy|MomCorp
Spacely Sprockets|Cogswell Cogs|Wernham Hogg|Beszel Holdings|Ul Qoma Partners|Chiang Logistics"""

COUNTRY = """Atlantis|Avalon|Arcadia|Borduria|Brigadoon|Carpathia|Elbonia|Eldorado|Florin|Freedonia
Genovia|Grand Fenwick|Illyria|Krakozhia|Laputa|Latveria|Lilliput|Markovia|Molvania|Narnia|Oceania
Osterlich|Panem|Parador|Ruritania|San Marcos|Sokovia|Sylvania|Tomainia|Utopia|Vespugia|Wakanda
Zamunda|Zembla|Aldovia|Bialya|Kyrat|Hidalgo|Novistrana|Kerova|Petoria|Pottsylvania|Qumar|Tropico
Urkesh|Valverde|Yerba Buena|Zubrowka"""


def main():
    DATA.mkdir(parents=True, exist_ok=True)
    (DATA / "entities").mkdir(exist_ok=True)

    pairs = 0
    lines = []
    seen = {}
    for group in SYNONYM_GROUPS:
        for w in group:
            others = [c for c in group if c != w]
            seen.setdefault(w, [])
            seen[w] += [c for c in others if c not in seen[w]]
    for w in sorted(seen):
        cands = seen[w]
        pairs += len(cands)
        lines.append(f"{w}\t{','.join(cands)}")
    (DATA / "synonyms.tsv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    (DATA / "stopwords.txt").write_text("\n".join(dict.fromkeys(STOPWORDS)) + "\n", encoding="utf-8")

    def write_pool(name, names):
        cleaned = [n.strip() for n in names if n.strip()]
        (DATA / "entities" / f"{name}.txt").write_text("\n".join(cleaned) + "\n", encoding="utf-8")
        return len(cleaned)

    n_per = write_pool("PERSON", PERSON)
    n_loc = write_pool("LOCATION", LOCATION.replace("\n", "|").split("|"))
    n_org = write_pool("ORGANIZATION", ORGANIZATION.replace("\n", "|").split("|"))
    n_cty = write_pool("COUNTRY", COUNTRY.replace("\n", "|").split("|"))

    print(f"synonym headwords: {len(seen)}, directed pairs: {pairs}")
    print(f"pools: PERSON={n_per} LOCATION={n_loc} ORGANIZATION={n_org} COUNTRY={n_cty}")


if __name__ == "__main__":
    main()
