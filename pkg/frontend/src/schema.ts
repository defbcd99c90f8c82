import Papa from "papaparse";
import { z } from "zod";

/** Column order of the simulator's result tables. */
export const RESULT_COLUMNS = [
  "scenario",
  "sweep_var",
  "sweep_value",
  "metric",
  "value",
  "ci_low",
  "ci_high",
  "trials",
  "seed",
] as const;

const numeric = z
  .string()
  .refine((s) => s !== "" && Number.isFinite(Number(s)), {
    message: "expected a finite number",
  })
  .transform(Number);

const optionalNumeric = z
  .string()
  .transform((s) => (s === "" ? null : Number(s)))
  .refine((v) => v === null || Number.isFinite(v), {
    message: "expected a finite number or empty",
  });

export const resultRowSchema = z.object({
  scenario: z.string().min(1),
  sweep_var: z.string(),
  sweep_value: optionalNumeric,
  metric: z.string().min(1),
  value: numeric,
  ci_low: optionalNumeric,
  ci_high: optionalNumeric,
  trials: optionalNumeric,
  seed: optionalNumeric,
});

export type ResultRow = z.infer<typeof resultRowSchema>;

export class SchemaError extends Error {}

/** Parse and validate a result CSV; throws SchemaError on any mismatch. */
export function parseResultsCsv(text: string): ResultRow[] {
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    throw new SchemaError(`CSV parse error: ${parsed.errors[0].message}`);
  }
  const header = parsed.meta.fields ?? [];
  if (header.join(",") !== RESULT_COLUMNS.join(",")) {
    throw new SchemaError(
      `unexpected header [${header.join(",")}], want [${RESULT_COLUMNS.join(",")}]`,
    );
  }
  return parsed.data.map((raw, i) => {
    const check = resultRowSchema.safeParse(raw);
    if (!check.success) {
      throw new SchemaError(
        `row ${i + 2}: ${check.error.issues[0].path.join(".")}: ${check.error.issues[0].message}`,
      );
    }
    return check.data;
  });
}
