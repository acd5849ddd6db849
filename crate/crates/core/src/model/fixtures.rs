//! The five-profile sample dataset and its three-partition distribution,
//! used by tests and the demo commands.

use super::distribution::PartitionDistribution;
use super::partition::Partition;
use super::record::{Record, RecordId};

pub fn ids(values: &[&str]) -> Vec<RecordId> {
    values
        .iter()
        .map(|v| RecordId::new(*v).expect("non-empty id"))
        .collect()
}

pub const PROFILE_HEADER: [&str; 5] = ["Name", "Email", "Title", "Company", "Loc"];

pub const PROFILE_ROWS: [[&str; 6]; 5] = [
    ["r1", "John Doe", "johndoe@email.com", "Software Engineer", "TechCorp", "SF"],
    ["r2", "J. Doe", "johndoe@email.com", "Software Engineer", "TechCorp LLC", "SF, CA"],
    ["r3", "Jane Smith", "janesmith@email.com", "Project Manager", "Innovate Tech", "New York"],
    ["r4", "Jane S.", "janesmith@email.com", "PM", "Innovate Tech", "NY"],
    ["r5", "Johnathan Doe", "johnathan.d@email.com", "Developer", "TechCorp", "SF"],
];

pub fn profile_records() -> Vec<Record> {
    PROFILE_ROWS
        .iter()
        .map(|row| {
            let attrs = PROFILE_HEADER
                .iter()
                .zip(&row[1..])
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect();
            Record::new(RecordId::new(row[0]).unwrap(), attrs).unwrap()
        })
        .collect()
}

/// `{r1,r2} {r3,r4} {r5}`: 0.5, `{r1,r2,r3} {r4,r5}`: 0.3,
/// `{r1,r3} {r2,r4} {r5}`: 0.2.
pub fn table2() -> PartitionDistribution {
    let p1 = Partition::new(vec![ids(&["r1", "r2"]), ids(&["r3", "r4"]), ids(&["r5"])]).unwrap();
    let p2 = Partition::new(vec![ids(&["r1", "r2", "r3"]), ids(&["r4", "r5"])]).unwrap();
    let p3 = Partition::new(vec![ids(&["r1", "r3"]), ids(&["r2", "r4"]), ids(&["r5"])]).unwrap();
    PartitionDistribution::new(vec![(p1, 0.5), (p2, 0.3), (p3, 0.2)]).unwrap()
}
