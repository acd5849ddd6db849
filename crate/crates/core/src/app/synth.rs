use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Partition, Record, RecordId};

const FIRST: &[&str] = &[
    "Alice", "Bernard", "Carmen", "Daniel", "Elena", "Farid", "Grace", "Hiroshi", "Ingrid", "Jamal",
    "Katarina", "Lorenzo", "Mei", "Nikolai", "Olivia", "Pradeep", "Quentin", "Rosa", "Stefan", "Tamara",
    "Umar", "Valeria", "Wei", "Ximena", "Yusuf", "Zofia",
];

const LAST: &[&str] = &[
    "Anderson", "Bianchi", "Castillo", "Dubois", "Eriksen", "Fujimoto", "Gallagher", "Hoffmann", "Iverson",
    "Jovanovic", "Kowalski", "Lindqvist", "Moreau", "Nakamura", "Okafor", "Petrov", "Quinlan", "Rasmussen",
    "Schneider", "Takahashi", "Underwood", "Vasquez", "Whitfield", "Yamamoto", "Zimmerman",
];

// (full name, short form, mail domain)
const COMPANIES: &[(&str, &str, &str)] = &[
    ("Northwind Corporation", "Northwind Corp", "northwind.com"),
    ("Globex Incorporated", "Globex Inc", "globex.com"),
    ("Initech Limited", "Initech Ltd", "initech.io"),
    ("Umbrella Laboratories", "Umbrella Labs", "umbrella.org"),
    ("Stark Industries", "Stark Ind", "stark.com"),
    ("Wayne Enterprises", "Wayne Ent", "wayne.net"),
    ("Acme Technologies", "Acme Tech", "acme.dev"),
    ("Hooli International", "Hooli Intl", "hooli.com"),
    ("Vandelay Industries", "Vandelay Ind", "vandelay.biz"),
    ("Tyrell Systems", "Tyrell Sys", "tyrell.ai"),
    ("Cyberdyne Robotics", "Cyberdyne", "cyberdyne.co"),
    ("Soylent Foods", "Soylent", "soylent.food"),
];

const TITLES: &[(&str, &str)] = &[
    ("Senior Software Engineer", "Sr. Software Eng."),
    ("Chief Executive Officer", "CEO"),
    ("Chief Technology Officer", "CTO"),
    ("Vice President of Sales", "VP Sales"),
    ("Product Manager", "PM"),
    ("Data Scientist", "Data Sci."),
    ("Research Associate Professor", "Res. Assoc. Prof."),
    ("Marketing Director", "Mktg Director"),
    ("Human Resources Manager", "HR Manager"),
    ("Financial Analyst", "Fin. Analyst"),
];

const CITIES: &[(&str, &str)] = &[
    ("New York", "NYC"),
    ("San Francisco", "SF"),
    ("Los Angeles", "LA"),
    ("Chicago", "CHI"),
    ("Boston", "BOS"),
    ("Seattle", "SEA"),
    ("Washington", "DC"),
    ("Hong Kong", "HK"),
    ("London", "LDN"),
    ("Singapore", "SG"),
    ("Toronto", "TOR"),
    ("Berlin", "BER"),
];

pub const SYNTHETIC_ATTRIBUTES: [&str; 5] = ["Name", "Email", "Title", "Company", "City"];

/// Shape of a planted-truth corpus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub entities: usize,
    pub min_duplicates: usize,
    pub max_duplicates: usize,
    /// Per-attribute probability that a copy is perturbed.
    pub noise: f64,
}

struct Entity {
    first: &'static str,
    last: &'static str,
    title: usize,
    company: usize,
    city: usize,
}

impl Entity {
    /// (clean value, abbreviated value) per attribute.
    fn variants(&self) -> [(String, String); 5] {
        let (company, company_short, domain) = COMPANIES[self.company];
        let (title, title_short) = TITLES[self.title];
        let (city, city_code) = CITIES[self.city];
        let first = self.first.to_lowercase();
        let last = self.last.to_lowercase();
        [
            (
                format!("{} {}", self.first, self.last),
                format!("{}. {}", &self.first[..1], self.last),
            ),
            (
                format!("{first}.{last}@{domain}"),
                format!("{}{last}@{domain}", &first[..1]),
            ),
            (title.into(), title_short.into()),
            (company.into(), company_short.into()),
            (city.into(), city_code.into()),
        ]
    }
}

fn char_edit(rng: &mut ChaCha8Rng, value: &str) -> String {
    let mut chars: Vec<char> = value.chars().collect();
    let edits = rng.gen_range(1..=2);
    for _ in 0..edits {
        if chars.len() < 2 {
            break;
        }
        let i = rng.gen_range(0..chars.len() - 1);
        match rng.gen_range(0..4) {
            0 => {
                chars.remove(i);
            }
            1 => chars.insert(i, (b'a' + rng.gen_range(0..26)) as char),
            2 => chars[i] = (b'a' + rng.gen_range(0..26)) as char,
            _ => chars.swap(i, i + 1),
        }
    }
    chars.into_iter().collect()
}

/// Generates `spec.entities` people, each copied 2–3 times (per `spec`), with
/// copies perturbed by abbreviations and character edits. Returns the
/// shuffled records and the planted partition.
pub fn generate_corpus(spec: &SyntheticSpec, seed: u64) -> Result<(Vec<Record>, Partition)> {
    if spec.entities == 0
        || spec.min_duplicates == 0
        || spec.min_duplicates > spec.max_duplicates
        || !(0.0..=1.0).contains(&spec.noise)
    {
        return Err(Error::Config(format!("invalid synthetic corpus parameters {spec:?}")));
    }
    if spec.entities > FIRST.len() * LAST.len() {
        return Err(Error::Config(format!(
            "at most {} synthetic entities are available",
            FIRST.len() * LAST.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names: Vec<(usize, usize)> = (0..FIRST.len())
        .flat_map(|f| (0..LAST.len()).map(move |l| (f, l)))
        .collect();
    names.shuffle(&mut rng);

    let mut rows: Vec<(usize, Vec<(String, String)>)> = Vec::new();
    for (e, &(f, l)) in names.iter().take(spec.entities).enumerate() {
        let entity = Entity {
            first: FIRST[f],
            last: LAST[l],
            title: rng.gen_range(0..TITLES.len()),
            company: rng.gen_range(0..COMPANIES.len()),
            city: rng.gen_range(0..CITIES.len()),
        };
        let variants = entity.variants();
        let copies = rng.gen_range(spec.min_duplicates..=spec.max_duplicates);
        for _ in 0..copies {
            let attributes = variants
                .iter()
                .zip(SYNTHETIC_ATTRIBUTES)
                .map(|((clean, short), name)| {
                    let value = if rng.gen_bool(spec.noise) {
                        if rng.gen_bool(0.5) {
                            short.clone()
                        } else {
                            char_edit(&mut rng, clean)
                        }
                    } else {
                        clean.clone()
                    };
                    (name.to_string(), value)
                })
                .collect();
            rows.push((e, attributes));
        }
    }
    rows.shuffle(&mut rng);

    let width = rows.len().to_string().len();
    let mut clusters = vec![Vec::new(); spec.entities];
    let mut records = Vec::with_capacity(rows.len());
    for (i, (e, attributes)) in rows.into_iter().enumerate() {
        let id = RecordId::new(format!("r{:0width$}", i + 1))?;
        clusters[e].push(id.clone());
        records.push(Record::new(id, attributes)?);
    }
    Ok((records, Partition::new(clusters)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: SyntheticSpec = SyntheticSpec {
        entities: 15,
        min_duplicates: 2,
        max_duplicates: 3,
        noise: 0.2,
    };

    #[test]
    fn corpus_shape() {
        let (records, truth) = generate_corpus(&SPEC, 3).unwrap();
        assert_eq!(truth.clusters().len(), 15);
        assert!(truth.clusters().iter().all(|c| (2..=3).contains(&c.len())));
        assert_eq!(records.len(), truth.len());
        assert!(records.iter().all(|r| r.attributes().len() == 5));
    }

    #[test]
    fn seeded() {
        assert_eq!(generate_corpus(&SPEC, 9).unwrap(), generate_corpus(&SPEC, 9).unwrap());
        assert_ne!(generate_corpus(&SPEC, 9).unwrap(), generate_corpus(&SPEC, 10).unwrap());
    }

    #[test]
    fn zero_noise_copies_are_identical() {
        let spec = SyntheticSpec { noise: 0.0, ..SPEC };
        let (records, truth) = generate_corpus(&spec, 1).unwrap();
        let by_id = |id: &RecordId| records.iter().find(|r| r.id() == id).unwrap().attributes().to_vec();
        for c in truth.clusters() {
            assert!(c.iter().all(|id| by_id(id) == by_id(&c[0])));
        }
    }
}
