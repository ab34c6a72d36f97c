/**
 * Trajectory CSV reader.
 *
 * The simulator writes one header row followed by numeric rows; columns are
 * documented in the simulator README and validated here so that a missing
 * column fails loudly with its name rather than as NaN panels.
 */

export const REQUIRED_COLUMNS = [
  "t",
  "X", "Y", "Z",
  "Vx", "Vy", "Vz",
  "phi", "theta", "psi",
  "p_rate", "q_rate", "r_rate",
  "beta", "beta_dot", "beta_ddot",
  "T1", "T2", "T3", "T4",
  "M_beta", "delta",
  "dhat_p1", "dhat_p2", "dhat_p3",
  "dhat_a1", "dhat_a2", "dhat_a3",
] as const;

export type ColumnName = (typeof REQUIRED_COLUMNS)[number];

export type Trajectory = Map<ColumnName, number[]>;

export class CsvError extends Error {}

export function parseTrajectory(text: string): Trajectory {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty CSV: no header row");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const index = new Map<string, number>();
  header.forEach((name, i) => index.set(name, i));
  for (const name of REQUIRED_COLUMNS) {
    if (!index.has(name)) {
      throw new CsvError(`missing column '${name}' in CSV header`);
    }
  }
  if (lines.length === 1) {
    throw new CsvError("empty CSV: header only, no data rows");
  }
  const data: Trajectory = new Map();
  for (const name of REQUIRED_COLUMNS) {
    data.set(name, new Array(lines.length - 1));
  }
  for (let r = 1; r < lines.length; r++) {
    const cells = lines[r].split(",");
    if (cells.length < header.length) {
      throw new CsvError(`row ${r} has ${cells.length} cells, expected ${header.length}`);
    }
    for (const name of REQUIRED_COLUMNS) {
      const value = Number(cells[index.get(name)!]);
      if (!Number.isFinite(value)) {
        throw new CsvError(`non-numeric value in column '${name}', row ${r}`);
      }
      data.get(name)![r - 1] = value;
    }
  }
  return data;
}
