package fixtures.app;

import javax.crypto.Mac;

// Pushes data into a MAC that was never keyed; the JCA throws at runtime.
public class PrematureMac {
    public void tag(byte[] message) throws Exception {
        Mac mac = Mac.getInstance("HmacSHA256");
        mac.update(message);
    }
}
