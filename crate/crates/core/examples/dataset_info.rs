//! Parse an ARFF file, bind its labels and print the dataset statistics.
//!
//! Run with a file of your own:
//! `cargo run --example dataset_info -- scene.arff scene.xml`
//! or without arguments to use a small inline dataset with 2 trailing labels.

use mullab::data::dataset_stats;
use mullab::io::{bind_labels, load_arff, parse_arff, read_label_file, split_dataset, LabelSpec, SplitSpec};

const INLINE: &str = "\
% toy data: two numeric features, one nominal, two binary labels
@relation toy
@attribute width numeric
@attribute height numeric
@attribute colour {red, green, blue}
@attribute sunny {0,1}
@attribute windy {0,1}
@data
1.0, 2.0, red,   1, 0
1.5, ?,   green, 1, 1
3.0, 0.5, blue,  0, 1
{0 2.5, 2 red, 3 1}
0.2, 1.1, green, 0, 0
2.2, 2.4, blue,  1, 1
";

fn main() -> mullab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let data = match args.as_slice() {
        [arff, labels] => load_arff(arff, &LabelSpec::Names(read_label_file(labels)?))?,
        [arff] => load_arff(arff, &LabelSpec::TrailingCount(1))?,
        _ => {
            let raw = parse_arff(INLINE)?;
            println!(
                "relation {:?}, {} attributes, {} rows",
                raw.relation_name,
                raw.attributes.len(),
                raw.rows.len()
            );
            bind_labels(&raw, &LabelSpec::Names(vec!["sunny".into(), "windy".into()]))?
        }
    };

    let stats = dataset_stats(&data)?;
    println!(
        "instances={} labels={} lcard={:.3} lden={:.3} distinct_labelsets={}",
        stats.n_instances, stats.n_labels, stats.lcard, stats.lden, stats.distinct_labelsets
    );

    let (train, test) = split_dataset(&data, &SplitSpec::ratio(0.67, 42))?;
    println!("seeded 67/33 split: {} train, {} test", train.len(), test.len());
    Ok(())
}
