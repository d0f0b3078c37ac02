public class PALIN {
    public static boolean palin(String word) {
        boolean matches = true;
        int lo = 0;
        int hi = word.length() - 1;
        while (lo < hi) {
            if (word.charAt(lo) != word.charAt(hi)) {
                matches = false;
            }
            lo += 1;
            hi -= 1;
        }
        return matches;
    }
}
